#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "degheat/error.hpp"
#include "degheat/fdoracle.hpp"

using namespace degheat;

namespace {

FdInputs linear() {
    return FdInputs{1.0, [](double x) { return x; }, [](double, double) { return 0.0; }, [](double) { return 0.0; },
                    [](double) { return 1.0; }};
}

// u = sin(pi x) exp(-pi^2 t) with a = 1 on a uniform grid.
double decay_error(std::size_t n, FdScheme scheme) {
    const double pi = std::numbers::pi;
    FdInputs in{1.0, [pi](double x) { return std::sin(pi * x); }, [](double, double) { return 0.0; },
                [](double) { return 0.0; }, [](double) { return 0.0; }};
    const TimeGrid g = TimeGrid::graded(0.1, n, 1.0);
    FdMesh mesh = FdMesh::uniform(1.0, n, g);
    mesh.scheme = scheme;
    mesh.implicitness = 0.5;
    const FdSolution s = fd_solve(in, Coefficient::power_law(g, 1.0, 0.0), mesh);
    double worst = 0.0;
    for (std::size_t j = 0; j < mesh.x.size(); ++j) {
        worst = std::max(worst, std::abs(s.field.at(j, n) - std::sin(pi * mesh.x[j]) * std::exp(-pi * pi * 0.1)));
    }
    return worst;
}

} // namespace

TEST_CASE("linear steady state is reproduced exactly") {
    const TimeGrid g = TimeGrid::graded(1.0, 20);
    for (FdScheme scheme : {FdScheme::Bdf2, FdScheme::Theta}) {
        FdMesh mesh = FdMesh::clustered(1.0, 30, g, 1e-6);
        mesh.scheme = scheme;
        const FdSolution s = fd_solve(linear(), Coefficient::power_law(g, 1.0, 1.0), mesh);
        for (double v : s.flux.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = 0; j < mesh.x.size(); ++j) {
            CHECK(s.field.at(j, 20) == doctest::Approx(mesh.x[j]).scale(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("constant state is reproduced exactly") {
    const TimeGrid g = TimeGrid::graded(1.0, 20);
    const FdInputs in{1.0, [](double) { return 3.0; }, [](double, double) { return 0.0; }, [](double) { return 3.0; },
                      [](double) { return 3.0; }};
    const FdSolution s = fd_solve(in, Coefficient::power_law(g, 1.0, 2.0), FdMesh::uniform(1.0, 25, g));
    for (double v : s.field.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("second-order convergence with a degenerate coefficient") {
    // u = (1 + theta) (1 + x^4) with a = t, theta = t^2 / 2
    const auto u = [](double x, double t) { return (1.0 + 0.5 * t * t) * (1.0 + std::pow(x, 4)); };
    const FdInputs in{1.0, [&](double x) { return u(x, 0.0); },
                      [](double x, double t) { return t * (1.0 + std::pow(x, 4) - 12.0 * x * x * (1.0 + 0.5 * t * t)); },
                      [&](double t) { return u(0.0, t); }, [&](double t) { return u(1.0, t); }};
    std::vector<double> err;
    for (std::size_t n : {20u, 40u, 80u}) {
        const TimeGrid g = TimeGrid::graded(1.0, n);
        const FdMesh mesh = FdMesh::uniform(1.0, n, g);
        const FdSolution s = fd_solve(in, Coefficient::power_law(g, 1.0, 1.0), mesh);
        double worst = 0.0;
        for (std::size_t it = 0; it < g.size(); ++it) {
            for (std::size_t j = 0; j < mesh.x.size(); ++j) worst = std::max(worst, std::abs(s.field.at(j, it) - u(mesh.x[j], g[it])));
        }
        err.push_back(worst);
    }
    CHECK(err[0] / err[1] > 3.5);
    CHECK(err[1] / err[2] > 3.5);
}

TEST_CASE("second-order convergence in space and time") {
    for (FdScheme scheme : {FdScheme::Bdf2, FdScheme::Theta}) {
        const double e1 = decay_error(40, scheme);
        const double e2 = decay_error(80, scheme);
        CHECK(e1 / e2 > 3.5);
        CHECK(e2 < 1e-3);
    }
}

TEST_CASE("clustered mesh grows geometrically to the uniform width") {
    const FdMesh m = FdMesh::clustered(2.0, 10, TimeGrid::graded(1.0, 4), 1e-4, 1.5);
    CHECK(m.x.front() == 0.0);
    CHECK(m.x.back() == doctest::Approx(2.0));
    CHECK(m.x[1] == doctest::Approx(1e-4));
    CHECK(m.x[2] - m.x[1] == doctest::Approx(1.5e-4));
    double widest = 0.0;
    for (std::size_t j = 1; j < m.x.size(); ++j) widest = std::max(widest, m.x[j] - m.x[j - 1]);
    CHECK(widest <= 0.2 + 1e-12);
    CHECK_NOTHROW(m.validate(2.0));
}

TEST_CASE("invalid meshes are rejected") {
    const TimeGrid g = TimeGrid::graded(1.0, 4);
    FdMesh m = FdMesh::uniform(1.0, 8, g);
    CHECK_THROWS_AS(m.validate(2.0), InputError);
    m.x[3] = m.x[2];
    CHECK_THROWS_AS(m.validate(1.0), InputError);
    CHECK_THROWS_AS(FdMesh::clustered(1.0, 8, g, -1.0), InputError);
    m = FdMesh::uniform(0.5, 8, g);
    CHECK_THROWS_AS(fd_solve(linear(), Coefficient::power_law(g, 1.0, 1.0), m), InputError);
}
