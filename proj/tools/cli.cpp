#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "degheat/direct.hpp"
#include "degheat/error.hpp"
#include "degheat/inverse.hpp"
#include "degheat/kernels.hpp"
#include "degheat/manufacture.hpp"
#include "degheat/problem.hpp"
#include "degheat/validate.hpp"

namespace degheat::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::string out;
    std::string coef;
    double tolerance = 1e-8;
    double relaxation = 1.0;
    std::size_t max_iterations = 200;
    std::size_t nt = 200;
    std::size_t nx = 64;
    std::size_t u_points = 21;
    double gamma = 2.0;
    bool force = false;
    bool no_band = false;
    std::string scenario = "heating";
    double beta = 1.0;
    double c = 1.0;
    double h = 1.0;
    double T = 1.0;
    bool neumann = false;
};

std::string num(double v) {
    if (!std::isfinite(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void event(std::ostream& err, const std::string& kind, ordered_json fields = ordered_json::object()) {
    ordered_json j;
    j["event"] = kind;
    for (auto it = fields.begin(); it != fields.end(); ++it) {
        j[it.key()] = it.value();
    }
    err << j.dump() << '\n';
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

// Files are written next to their destination under a temporary name and
// renamed together by commit(); anything not committed is removed.
class OutputSet {
public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet() {
        for (const auto& [final_path, tmp] : pending_) {
            std::error_code ec;
            fs::remove(tmp, ec);
        }
    }

    void add(const std::string& name, const std::string& content) {
        fs::create_directories(dir_);
        const fs::path final_path = fs::path(dir_) / name;
        const fs::path tmp = fs::path(dir_) / ("." + name + ".tmp");
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) {
            throw InputError("cannot write '" + tmp.string() + "'");
        }
        pending_.emplace_back(final_path, tmp);
    }

    void commit() {
        for (const auto& [final_path, tmp] : pending_) {
            fs::rename(tmp, final_path);
        }
        pending_.clear();
    }

private:
    std::string dir_;
    std::vector<std::pair<fs::path, fs::path>> pending_;
};

Coefficient read_coefficient(const std::string& path, double beta) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open coefficient file '" + path + "'");
    }
    std::vector<double> t, a;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string c0, c1;
        std::getline(ss, c0, ',');
        std::getline(ss, c1, ',');
        char* end0 = nullptr;
        char* end1 = nullptr;
        const double tv = std::strtod(c0.c_str(), &end0);
        const double av = std::strtod(c1.c_str(), &end1);
        if (end0 == c0.c_str() || end1 == c1.c_str()) {
            if (t.empty()) {
                continue; // header
            }
            throw InputError("coefficient file: malformed line " + std::to_string(lineno));
        }
        t.push_back(tv);
        a.push_back(av);
    }
    if (t.size() < 3) {
        throw InputError("coefficient file needs at least 3 rows");
    }
    return Coefficient(TimeGrid::from_nodes(std::move(t)), std::move(a), beta);
}

std::string coefficient_csv(const Coefficient& a) {
    std::string s = "t,a\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += num(a.grid()[i]) + "," + num(a[i]) + "\n";
    }
    return s;
}

void require_options(const RunConfig& cfg) {
    if (!(cfg.tolerance > 0.0)) {
        throw InputError("--tol must be positive");
    }
    if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0)) {
        throw InputError("--relax must lie in (0, 1]");
    }
    if (cfg.nt < 2 || cfg.nx < 2) {
        throw InputError("--nt and --nx must be at least 2");
    }
    if (!(cfg.gamma >= 1.0)) {
        throw InputError("--gamma must be at least 1");
    }
}

int run_direct(const RunConfig& cfg, std::ostream& err) {
    const ProblemData p = load_problem(cfg.input);
    if (cfg.coef.empty()) {
        throw InputError("direct needs --coef");
    }
    const Coefficient a = read_coefficient(cfg.coef, p.beta);
    const FluxTrace F = FluxOperator(p, a.grid(), cfg.nx).flux(a);
    const std::vector<double> xs = uniform_nodes(p.h, std::max<std::size_t>(cfg.u_points, 3) - 1);
    const TemperatureField u = evaluate_u(p, a, xs, cfg.nx);

    std::string flux = "t,ux0\n";
    for (std::size_t i = 1; i < F.values.size(); ++i) {
        flux += num(F.grid[i]) + "," + num(F.values[i]) + "\n";
    }
    std::string field = "x,t,u\n";
    for (std::size_t it = 0; it < u.grid.size(); ++it) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            field += num(xs[ix]) + "," + num(u.grid[it]) + "," + num(u.at(ix, it)) + "\n";
        }
    }
    OutputSet files(cfg.out);
    files.add("u.csv", field);
    files.add("flux.csv", flux);
    files.commit();
    event(err, "done", {{"subcommand", "direct"}, {"nodes", a.size()}});
    return kOk;
}

int run_inverse(const RunConfig& cfg, std::ostream& err) {
    const ProblemData p = load_problem(cfg.input);
    const HypothesisReport hyp = check_hypotheses(p);
    ordered_json report;
    report["hypotheses"] = report_to_json(hyp);
    if (!hyp.pass() && !cfg.force) {
        report["status"] = "hypotheses_failed";
        OutputSet files(cfg.out);
        files.add("report.json", report.dump(2) + "\n");
        files.commit();
        ordered_json failed = ordered_json::array();
        for (const auto& f : hyp.failures()) {
            failed.push_back(f);
        }
        event(err, "hypotheses_failed", {{"failures", failed}});
        return kInvalid;
    }

    const TimeGrid grid = TimeGrid::graded(p.T, cfg.nt, cfg.gamma);
    PicardOptions opts;
    opts.relaxation = cfg.relaxation;
    opts.tolerance = cfg.tolerance;
    opts.max_iterations = cfg.max_iterations;
    opts.x_panels = cfg.nx;
    opts.enforce_band = !cfg.no_band;
    opts.force = true;
    const InverseResult r = picard_solve(p, grid, opts);

    std::string a_csv = "t,a,a_over_t_beta,band_upper,band_lower\n";
    for (std::size_t i = 0; i < r.a.size(); ++i) {
        const double upper = r.band ? r.band->upper[i] : std::numeric_limits<double>::quiet_NaN();
        const double lower = r.band ? r.band->lower[i] : std::numeric_limits<double>::quiet_NaN();
        a_csv += num(grid[i]) + "," + num(r.a[i]) + "," + num(r.a.weighted(i)) + "," + num(upper) + "," +
                 num(lower) + "\n";
    }
    std::string conv = "iter,weighted_change,relaxation\n";
    for (const auto& rec : r.log.records) {
        conv += std::to_string(rec.iteration) + "," + num(rec.weighted_change) + "," + num(rec.relaxation) + "\n";
    }

    double fitted = std::numeric_limits<double>::quiet_NaN();
    try {
        fitted = estimate_beta(r.a);
    } catch (const InputError&) {
    }
    double H0 = std::numeric_limits<double>::quiet_NaN();
    try {
        H0 = h_limit(p);
    } catch (const InputError&) {
    }
    report["status"] = r.converged ? "converged" : "not_converged";
    report["converged"] = r.converged;
    report["iterations"] = r.iterations;
    report["residual"] = number_or_null(r.residual);
    report["fitted_beta"] = number_or_null(fitted);
    report["h_limit"] = number_or_null(H0);
    if (r.band) {
        report["band"] = {{"H1", number_or_null(r.band->H1)},
                          {"M1", number_or_null(r.band->M1)},
                          {"C6_surrogate", number_or_null(r.band->C6)}};
    }
    report["kernels"] = std::string(kernels::name(kernels::backend()));

    OutputSet files(cfg.out);
    files.add("a.csv", a_csv);
    files.add("convergence.csv", conv);
    files.add("report.json", report.dump(2) + "\n");
    files.commit();
    event(err, r.converged ? "converged" : "not_converged",
          {{"iterations", r.iterations}, {"residual", number_or_null(r.residual)}});
    return r.converged ? kOk : kNotConverged;
}

int run_manufacture(const RunConfig& cfg, std::ostream& err) {
    if (!(cfg.beta >= 1.0)) {
        throw InputError("strong degeneration requires beta ≥ 1");
    }
    if (!(cfg.c > 0.0) || !(cfg.h > 0.0) || !(cfg.T > 0.0)) {
        throw InputError("--c, --h and --T must be positive");
    }
    const Scenario sc = scenario_by_name(cfg.scenario, cfg.h);
    const FdMesh mesh = oracle_mesh(cfg.h, cfg.T, cfg.nt, cfg.nx, cfg.gamma);
    const Coefficient truth = Coefficient::power_law(mesh.grid, cfg.c, cfg.beta);
    Manufactured m = manufacture(truth, sc, mesh, cfg.nx);
    const ProblemData problem = cfg.neumann ? neumann_lift(m.problem) : m.problem;

    OutputSet files(cfg.out);
    files.add("problem.json", problem_to_json(problem));
    files.add("a_true.csv", coefficient_csv(m.truth));
    files.commit();
    event(err, "done", {{"subcommand", "manufacture"}, {"scenario", cfg.scenario}, {"nt", problem.nt()},
                        {"nx", problem.nx()}});
    return kOk;
}

int run_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ProblemData p = load_problem(cfg.input);
    const HypothesisReport hyp = check_hypotheses(p);
    ordered_json report;
    report["pass"] = hyp.pass();
    report["hypotheses"] = report_to_json(hyp);
    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty()) {
        out << text;
    } else {
        OutputSet files(cfg.out);
        files.add("report.json", text);
        files.commit();
    }
    event(err, hyp.pass() ? "hypotheses_passed" : "hypotheses_failed");
    return hyp.pass() ? kOk : kInvalid;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Recovery of a degenerate time-dependent heat-conduction coefficient"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help");

    auto add_solver = [&cfg](CLI::App* sub) {
        sub->add_option("--tol", cfg.tolerance, "Picard tolerance (weighted sup norm)");
        sub->add_option("--relax", cfg.relaxation, "Relaxation factor in (0, 1]");
        sub->add_option("--max-iter", cfg.max_iterations, "Maximum Picard iterations");
        sub->add_option("--nt", cfg.nt, "Time panels");
        sub->add_option("--nx", cfg.nx, "Space panels");
        sub->add_option("--gamma", cfg.gamma, "Time grid grading exponent");
    };

    CLI::App* direct = app.add_subcommand("direct", "Flux and temperature for a given coefficient");
    direct->add_option("--input", cfg.input, "Problem JSON")->required();
    direct->add_option("--coef", cfg.coef, "Coefficient CSV (t,a)")->required();
    direct->add_option("--out", cfg.out, "Output directory")->required();
    direct->add_option("--nx", cfg.nx, "Space panels for the volume potential");
    direct->add_option("--u-points", cfg.u_points, "Number of x points in u.csv");

    CLI::App* inverse = app.add_subcommand("inverse", "Recover a(t) from the problem data");
    inverse->add_option("--input", cfg.input, "Problem JSON")->required();
    inverse->add_option("--out", cfg.out, "Output directory")->required();
    add_solver(inverse);
    inverse->add_flag("--force", cfg.force, "Skip the hypothesis gate");
    inverse->add_flag("--no-band", cfg.no_band, "Do not clip iterates to the upper band");

    CLI::App* manufacture = app.add_subcommand("manufacture", "Generate data from a power-law coefficient");
    manufacture->set_help_flag("--help", "Print help");
    manufacture->add_option("--scenario", cfg.scenario, "steady-linear, constant or heating");
    manufacture->add_option("--beta", cfg.beta, "Degeneration exponent (>= 1)");
    manufacture->add_option("--c", cfg.c, "Coefficient scale: a = c t^beta");
    manufacture->add_option("--h", cfg.h, "Domain length");
    manufacture->add_option("--T", cfg.T, "Time horizon");
    manufacture->add_option("--out", cfg.out, "Output directory")->required();
    manufacture->add_option("--nt", cfg.nt, "Oracle time panels");
    manufacture->add_option("--nx", cfg.nx, "Oracle space panels away from x = 0");
    manufacture->add_option("--gamma", cfg.gamma, "Time grid grading exponent");
    manufacture->add_flag("--neumann", cfg.neumann, "Write the Neumann-form lift of the data");

    CLI::App* validate = app.add_subcommand("validate", "Check the hypotheses on a problem file");
    validate->add_option("--input", cfg.input, "Problem JSON")->required();
    validate->add_option("--out", cfg.out, "Output directory (default: standard output)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        event(err, "usage_error", {{"message", e.what()}});
        return kInvalid;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "manufacture" && manufacture->count("--nt") == 0) {
        cfg.nt = 800;
    }
    if (cfg.subcommand == "manufacture" && manufacture->count("--nx") == 0) {
        cfg.nx = 200;
    }
    event(err, "start", {{"subcommand", cfg.subcommand}});

    try {
        require_options(cfg);
        if (cfg.subcommand == "direct") {
            return run_direct(cfg, err);
        }
        if (cfg.subcommand == "inverse") {
            return run_inverse(cfg, err);
        }
        if (cfg.subcommand == "manufacture") {
            return run_manufacture(cfg, err);
        }
        return run_validate(cfg, out, err);
    } catch (const InputError& e) {
        event(err, "invalid_input", {{"message", e.what()}});
        return kInvalid;
    } catch (const AdmissibilityError& e) {
        event(err, "solver_error", {{"message", e.what()}, {"node", e.node()}});
        return kSolverFailure;
    } catch (const SolverError& e) {
        event(err, "solver_error", {{"message", e.what()}});
        return kSolverFailure;
    } catch (const std::exception& e) {
        event(err, "solver_error", {{"message", e.what()}});
        return kSolverFailure;
    }
}

} // namespace degheat::cli
