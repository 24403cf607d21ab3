#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "degheat/problem.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace degheat;

namespace {

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (err_text != nullptr) *err_text = err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

void write_coef(const fs::path& p, std::size_t panels, double beta) {
    const TimeGrid g = TimeGrid::graded(1.0, panels);
    std::ofstream out(p);
    out << "t,a\n";
    for (double t : g.nodes()) out << t << "," << std::pow(t, beta) << "\n";
}

} // namespace

TEST_CASE("direct on u = x writes unit flux") {
    const fs::path dir = testing::scratch_dir("cli_linear");
    REQUIRE(run({"manufacture", "--scenario", "steady-linear", "--beta", "1", "--nt", "40", "--nx", "20", "--out",
                 (dir / "data").string()}) == cli::kOk);
    write_coef(dir / "coef.csv", 20, 1.0);
    REQUIRE(run({"direct", "--input", (dir / "data/problem.json").string(), "--coef", (dir / "coef.csv").string(),
                 "--out", (dir / "out").string()}) == cli::kOk);
    const auto flux = csv(dir / "out/flux.csv");
    REQUIRE(flux.size() == 20);
    for (const auto& row : flux) CHECK(row[1] == doctest::Approx(1.0).epsilon(1e-12));
    const auto u = csv(dir / "out/u.csv");
    CHECK(u.size() == 21 * 21);
    for (const auto& row : u) CHECK(row[2] == doctest::Approx(row[0]).scale(1.0).epsilon(1e-12));
}

TEST_CASE("direct on constant data writes a constant field") {
    const fs::path dir = testing::scratch_dir("cli_constant");
    REQUIRE(run({"manufacture", "--scenario", "constant", "--nt", "40", "--nx", "20", "--out",
                 (dir / "data").string()}) == cli::kOk);
    write_coef(dir / "coef.csv", 12, 1.0);
    REQUIRE(run({"direct", "--input", (dir / "data/problem.json").string(), "--coef", (dir / "coef.csv").string(),
                 "--out", (dir / "out").string(), "--u-points", "5"}) == cli::kOk);
    for (const auto& row : csv(dir / "out/u.csv")) CHECK(row[2] == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& row : csv(dir / "out/flux.csv")) CHECK(std::abs(row[1]) < 1e-10);
}

TEST_CASE("manufacture is reproducible byte for byte") {
    const fs::path dir = testing::scratch_dir("cli_repro");
    const std::vector<std::string> base{"manufacture", "--beta", "2", "--nt", "30", "--nx", "20", "--out"};
    auto a = base, b = base;
    a.push_back((dir / "a").string());
    b.push_back((dir / "b").string());
    REQUIRE(run(a) == cli::kOk);
    REQUIRE(run(b) == cli::kOk);
    CHECK(slurp(dir / "a/problem.json") == slurp(dir / "b/problem.json"));
    CHECK(slurp(dir / "a/a_true.csv") == slurp(dir / "b/a_true.csv"));
}

TEST_CASE("weak degeneration is rejected without output") {
    const fs::path dir = testing::scratch_dir("cli_weak");
    std::string err;
    CHECK(run({"manufacture", "--beta", "0.5", "--out", (dir / "o").string()}, &err) == cli::kInvalid);
    CHECK_FALSE(fs::exists(dir / "o/problem.json"));
    CHECK(err.find("invalid_input") != std::string::npos);
    const auto line = err.substr(err.rfind('{'));
    CHECK(nlohmann::json::parse(line)["event"] == "invalid_input");
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}) == cli::kInvalid);
    CHECK(run({"direct", "--input", "x.json"}) == cli::kInvalid);
    CHECK(run({"bogus"}) == cli::kInvalid);
    CHECK(run({"inverse", "--input", "/nonexistent.json", "--out", "/tmp/none"}) == cli::kInvalid);
    CHECK(run({"--help"}) == cli::kOk);
}

TEST_CASE("solver failures exit 3") {
    const fs::path dir = testing::scratch_dir("cli_solver");
    REQUIRE(run({"manufacture", "--nt", "30", "--nx", "20", "--out", (dir / "data").string()}) == cli::kOk);
    {
        std::ofstream out(dir / "coef.csv");
        out << "t,a\n0,0\n0.25,0.25\n0.5,0\n1,1\n";
    }
    std::string err;
    CHECK(run({"direct", "--input", (dir / "data/problem.json").string(), "--coef", (dir / "coef.csv").string(), "--out",
               (dir / "out").string()},
              &err) == cli::kSolverFailure);
    CHECK(err.find("solver_error") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out/flux.csv"));
}

TEST_CASE("inverse refuses data with a negative flux datum") {
    const fs::path dir = testing::scratch_dir("cli_sign");
    ProblemData p = testing::tabulate(
        1.0, 20, 40, [](double x) { return x; }, [](double x, double) { return 1.0 + x; }, [](double) { return 0.0; },
        [](double t) { return 1.0 + 3.0 * t; }, [](double t) { return t; });
    p.mu3[10] = -0.5;
    save_problem(p, (dir / "p.json").string());
    CHECK(run({"inverse", "--input", (dir / "p.json").string(), "--out", (dir / "out").string()}) == cli::kInvalid);
    CHECK_FALSE(fs::exists(dir / "out/a.csv"));
    const auto report = nlohmann::json::parse(slurp(dir / "out/report.json"));
    CHECK(report["status"] == "hypotheses_failed");
    bool found = false;
    for (const auto& c : report["hypotheses"]) {
        if (c["name"] == "mu3_positive") {
            found = true;
            CHECK(c["pass"] == false);
        }
    }
    CHECK(found);
    CHECK(run({"validate", "--input", (dir / "p.json").string()}) == cli::kInvalid);
}

TEST_CASE("inverse on u = x recovers the flux datum") {
    const fs::path dir = testing::scratch_dir("cli_inverse_linear");
    REQUIRE(run({"manufacture", "--scenario", "steady-linear", "--beta", "1", "--nt", "40", "--nx", "20", "--out",
                 (dir / "data").string()}) == cli::kOk);
    CHECK(run({"inverse", "--input", (dir / "data/problem.json").string(), "--out", (dir / "x").string()}) ==
          cli::kInvalid);
    REQUIRE(run({"inverse", "--input", (dir / "data/problem.json").string(), "--out", (dir / "out").string(), "--force",
                 "--nt", "20"}) == cli::kOk);
    const auto a = csv(dir / "out/a.csv");
    REQUIRE(a.size() == 21);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i][1] == doctest::Approx(a[i][0]).epsilon(1e-12));
    const auto report = nlohmann::json::parse(slurp(dir / "out/report.json"));
    CHECK(report["converged"] == true);
    CHECK(fs::exists(dir / "out/convergence.csv"));
}

TEST_CASE("inverse on heating data recovers the exponent") {
    const fs::path dir = testing::scratch_dir("cli_inverse_heating");
    REQUIRE(run({"manufacture", "--beta", "2", "--nt", "160", "--nx", "100", "--out", (dir / "data").string()}) ==
            cli::kOk);
    REQUIRE(run({"validate", "--input", (dir / "data/problem.json").string(), "--out", (dir / "v").string()}) ==
            cli::kOk);
    CHECK(nlohmann::json::parse(slurp(dir / "v/report.json"))["pass"] == true);
    REQUIRE(run({"inverse", "--input", (dir / "data/problem.json").string(), "--out", (dir / "out").string(), "--nt",
                 "40"}) == cli::kOk);
    const auto report = nlohmann::json::parse(slurp(dir / "out/report.json"));
    CHECK(report["fitted_beta"].get<double>() >= 1.95);
    CHECK(report["fitted_beta"].get<double>() <= 2.05);
    CHECK(run({"inverse", "--input", (dir / "data/problem.json").string(), "--out", (dir / "short").string(), "--nt",
               "40", "--max-iter", "1"}) == cli::kNotConverged);
}

TEST_CASE("direct output matches the stored snapshot") {
    const fs::path data = DEGHEAT_TEST_DATA;
    const fs::path dir = testing::scratch_dir("cli_golden");
    REQUIRE(run({"direct", "--input", (data / "heating_problem.json").string(), "--coef",
                 (data / "heating_coef.csv").string(), "--out", dir.string(), "--u-points", "6", "--nx", "32"}) ==
            cli::kOk);
    for (const char* name : {"flux.csv", "u.csv"}) {
        const auto got = csv(dir / name);
        const auto want = csv(data / (std::string("golden_") + name));
        REQUIRE(got.size() == want.size());
        for (std::size_t r = 0; r < got.size(); ++r) {
            REQUIRE(got[r].size() == want[r].size());
            for (std::size_t c = 0; c < got[r].size(); ++c) {
                CHECK(got[r][c] == doctest::Approx(want[r][c]).epsilon(1e-6).scale(1.0));
            }
        }
    }
}
