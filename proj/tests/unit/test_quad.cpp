#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "degheat/error.hpp"
#include "degheat/quad.hpp"

using namespace degheat;

namespace {

double I1_closed(double beta) {
    const double q = 1.0 / (beta + 1.0);
    return std::sqrt(std::numbers::pi) * std::tgamma(1.0 + q) / std::tgamma(0.5 + q);
}

double gk(const std::function<double(double)>& fn, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 12, 1e-13);
}

} // namespace

TEST_CASE("gauss legendre integrates polynomials exactly") {
    for (std::size_t n : {4u, 8u, 16u, 64u}) {
        const GaussRule r = gauss_legendre(n);
        REQUIRE(r.x.size() == n);
        const int deg = static_cast<int>(2 * n - 1);
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            s += r.w[k] * std::pow(r.x[k], deg);
        }
        CHECK(s == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_legendre(5), InputError);
}

TEST_CASE("I1 matches the Gamma-function closed form") {
    CHECK(I1(0.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(I1(1.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
    CHECK(I1(3.0) == doctest::Approx(1.3110287771460599).epsilon(1e-13));
    for (double beta : {0.5, 2.0, 3.0, 7.5, 20.0}) {
        CHECK(I1(beta) == doctest::Approx(I1_closed(beta)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(I1(-0.1), InputError);
}

TEST_CASE("singular integral of a constant density is exact for power laws") {
    for (double beta : {1.0, 2.0, 3.0}) {
        const TimeGrid g = TimeGrid::graded(1.0, 20);
        const Theta th = Theta::accumulate(Coefficient::power_law(g, 1.0, beta));
        const std::vector<double> one(g.size(), 1.0);
        for (std::size_t i : {1u, 7u, 20u}) {
            const double exact = std::sqrt(beta + 1.0) * std::pow(g[i], (1.0 - beta) / 2.0) * I1(beta);
            CHECK(singular_integral(one, th, i) == doctest::Approx(exact).epsilon(1e-12));
        }
        CHECK_THROWS_AS(build_singular_rule(th, 0), InputError);
    }
}

TEST_CASE("singular integral for a unit coefficient") {
    const TimeGrid g = TimeGrid::graded(2.0, 16);
    const Theta th = Theta::accumulate(Coefficient(g, std::vector<double>(g.size(), 1.0), 0.0));
    const std::vector<double> one(g.size(), 1.0);
    for (std::size_t i : {1u, 9u, 16u}) CHECK(singular_integral(one, th, i) == doctest::Approx(2.0 * std::sqrt(g[i])).epsilon(1e-13));
}

TEST_CASE("singular rule is exact for piecewise-linear densities") {
    struct Case {
        double beta;
        double c;
        std::function<double(double)> g;
    };
    for (const Case& k : {Case{1.0, 2.0, [](double t) { return std::cos(3.0 * t); }}, Case{2.0, 1.0, [](double t) { return t; }}}) {
        const TimeGrid g = TimeGrid::graded(1.0, 6);
        const Theta th = Theta::accumulate(Coefficient::power_law(g, k.c, k.beta));
        std::vector<double> dens(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) dens[i] = k.g(g[i]);
        for (std::size_t i : {2u, 6u}) {
            const double T = g[i];
            const auto fn = [&](double tau) {
                return interpolate(g.nodes(), dens, tau) / std::sqrt(th.at(T) - th.at(tau));
            };
            // panel by panel, with tau = T - s^2 on the last panel
            double ref = 0.0;
            for (std::size_t j = 0; j + 1 < i; ++j) ref += gk(fn, g[j], g[j + 1]);
            ref += gk([&](double s) { return 2.0 * s * interpolate(g.nodes(), dens, T - s * s) / std::sqrt(th.tail(i, s * s)); },
                      0.0, std::sqrt(T - g[i - 1]));
            CHECK(singular_integral(dens, th, i) == doctest::Approx(ref).epsilon(1e-13));
        }
    }
}

TEST_CASE("time points integrate against the kernel") {
    const TimeGrid g = TimeGrid::graded(1.0, 12);
    const Theta th = Theta::accumulate(Coefficient::power_law(g, 1.0, 1.0));
    for (int levels : {0, 24}) {
        for (std::size_t i : {1u, 5u, 12u}) {
            const TimePoints tp = time_points(th, i, levels);
            double plain = 0.0, inv = 0.0, lin = 0.0;
            for (std::size_t k = 0; k < tp.size(); ++k) {
                plain += tp.weight[k];
                inv += tp.weight[k] / std::sqrt(tp.gap[k]);
                lin += (tp.left[k] * g[tp.panel[k]] + tp.right[k] * g[tp.panel[k] + 1]);
                CHECK(tp.gap[k] == doctest::Approx(th.at(g[i]) - th.at(tp.tau[k])).epsilon(1e-12));
            }
            CHECK(plain == doctest::Approx(g[i]).epsilon(1e-13));
            CHECK(inv == doctest::Approx(std::sqrt(2.0) * std::numbers::pi / 2).epsilon(1e-10));
            CHECK(lin == doctest::Approx(g[i] * g[i] / 2).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(time_points(th, 0), InputError);
}

TEST_CASE("spatial rule matches adaptive quadrature of the green function") {
    const SpatialRule rule(uniform_nodes(1.0, 64));
    std::vector<double> lin(rule.nodes().size());
    for (std::size_t k = 0; k < lin.size(); ++k) lin[k] = std::exp(rule.nodes()[k]);
    for (Boundary kind : {Boundary::Dirichlet, Boundary::Neumann}) {
        const GreenParams p{kind, 1.0};
        for (double d : {1e-7, 1e-4, 1e-2, 0.5}) {
            for (double x : {0.0, 0.013, 0.5, 1.0}) {
                const auto G = [&](double xi) { return green(p, x, xi, d); };
                // split at the peak so the adaptive rule sees it
                const double m = std::clamp(x, 1e-3, 1.0 - 1e-3);
                const double mass = gk(G, 0.0, m) + gk(G, m, 1.0);
                CHECK(rule.mass(x, d, kind) == doctest::Approx(mass).epsilon(1e-10).scale(1.0));
                const auto Gg = [&](double xi) { return G(xi) * interpolate(rule.nodes(), lin, xi); };
                const double ref = gk(Gg, 0.0, m) + gk(Gg, m, 1.0);
                CHECK(rule.integrate(x, d, kind, lin) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
            }
        }
    }
}

TEST_CASE("spatial rule rejects bad grids") {
    CHECK_THROWS_AS(SpatialRule(std::vector<double>{0.0}), InputError);
    CHECK_THROWS_AS(SpatialRule(std::vector<double>{0.0, 0.5, 0.5, 1.0}), InputError);
}

TEST_CASE("insulated evolution conserves the spatial mean") {
    const SpatialRule rule(uniform_nodes(1.0, 40));
    std::vector<double> phi(rule.nodes().size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = 1.0 + rule.nodes()[k] * rule.nodes()[k];
    double trapezoid = 0.0;
    for (std::size_t k = 0; k + 1 < phi.size(); ++k) trapezoid += 0.5 * (phi[k] + phi[k + 1]) / 40.0;
    for (double d : {1e-4, 1e-2, 0.3}) {
        const double mean = gk([&](double x) { return rule.integrate(x, d, Boundary::Neumann, phi); }, 0.0, 1.0);
        CHECK(mean == doctest::Approx(trapezoid).epsilon(1e-10));
    }
}
