#include "degheat/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "degheat/error.hpp"
#include "degheat/greens.hpp"
#include "degheat/kernels.hpp"

namespace degheat {

namespace {

// Bilinear interpolation of a row-major (x, t) table.
double table_at(const ProblemData& p, const std::vector<double>& table, double x, double t) {
    const double xc = std::clamp(x, p.x_grid.front(), p.x_grid.back());
    const double tc = std::clamp(t, p.t_grid.front(), p.t_grid.back());
    const std::size_t i = locate(p.x_grid, xc);
    const std::size_t j = locate(p.t_grid, tc);
    const std::size_t nt = p.nt();
    const double sx = (xc - p.x_grid[i]) / (p.x_grid[i + 1] - p.x_grid[i]);
    const double st = (tc - p.t_grid[j]) / (p.t_grid[j + 1] - p.t_grid[j]);
    const double v00 = table[i * nt + j];
    const double v01 = table[i * nt + j + 1];
    const double v10 = table[(i + 1) * nt + j];
    const double v11 = table[(i + 1) * nt + j + 1];
    return (1.0 - sx) * ((1.0 - st) * v00 + st * v01) + sx * ((1.0 - st) * v10 + st * v11);
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b) {
    if (a.size() != b.size() || !std::equal(a.nodes().begin(), a.nodes().end(), b.nodes().begin())) {
        throw SolverError("coefficient is sampled on a different time grid than the solver");
    }
}

void require_positive_coefficient(const Coefficient& a) {
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (!(a[i] > 0.0)) {
            throw SolverError("coefficient vanishes at t = " + std::to_string(a.grid()[i]) +
                              " (theta must increase strictly on (0, T])");
        }
    }
}

std::vector<double> trapezoid_weights(const TimeGrid& grid, std::size_t i) {
    std::vector<double> w(i + 1, 0.0);
    for (std::size_t j = 0; j < i; ++j) {
        const double half = 0.5 * grid.width(j);
        w[j] += half;
        w[j + 1] += half;
    }
    return w;
}

} // namespace

FluxOperator::FluxOperator(const ProblemData& problem, TimeGrid grid, std::size_t x_panels)
    : h_(problem.h), grid_(std::move(grid)), data_rule_(problem.x_grid),
      solver_rule_(uniform_nodes(problem.h, std::max<std::size_t>(x_panels, 2))) {
    problem.validate();
    if (std::abs(grid_.horizon() - problem.T) > 1e-12 * problem.T) {
        throw InputError("solver time grid must span [0, T] of the problem");
    }
    const DerivedData d = derive(problem);
    const std::size_t n = grid_.size();
    g2_.resize(n);
    g3_.resize(n);
    mu3_.resize(n);
    fx0_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid_[i];
        g2_[i] = problem.f_at(0.0, t) - interpolate(problem.t_grid, d.mu1_t, t);
        g3_[i] = interpolate(problem.t_grid, d.mu2_t, t) - problem.f_at(problem.h, t);
        mu3_[i] = problem.mu3_at(t);
        fx0_[i] = table_at(problem, d.f_x, 0.0, t);
    }
    phi_x_ = data_rule_.prepare(d.phi_x);
    const auto xs = solver_rule_.nodes();
    std::vector<double> column(xs.size());
    fx_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < xs.size(); ++k) {
            column[k] = table_at(problem, d.f_x, xs[k], grid_[i]);
        }
        fx_.push_back(solver_rule_.prepare(column));
    }
}

FluxTrace FluxOperator::flux(const Coefficient& a, FluxTerms* terms) const {
    require_same_grid(a.grid(), grid_);
    require_positive_coefficient(a);
    const Theta theta = Theta::accumulate(a);
    const std::size_t n = grid_.size();
    const auto& k = kernels::active();
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

    FluxTrace out{grid_, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN())};
    if (terms != nullptr) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        terms->initial.assign(n, nan);
        terms->left.assign(n, nan);
        terms->right.assign(n, nan);
        terms->volume.assign(n, nan);
    }

    std::vector<double> isq, rem, far;
    for (std::size_t i = 1; i < n; ++i) {
        const TimePoints pts = time_points(theta, i);
        const std::size_t m = pts.size();
        isq.resize(m);
        rem.resize(m);
        far.resize(m);
        k.inv_sqrt(pts.gap.data(), isq.data(), m);
        k.boundary_series(pts.gap.data(), rem.data(), far.data(), m, h_);

        double singular = 0.0;
        double regular = 0.0;
        double right = 0.0;
        for (std::size_t q = 0; q < m; ++q) {
            const std::size_t p = pts.panel[q];
            const double g2 = pts.left[q] * g2_[p] + pts.right[q] * g2_[p + 1];
            const double g3 = pts.left[q] * g3_[p] + pts.right[q] * g3_[p + 1];
            singular += g2 * isq[q];
            regular += g2 * rem[q];
            right += g3 * far[q];
        }

        const double initial = data_rule_.integrate(0.0, theta[i], Boundary::Neumann, phi_x_);

        const std::vector<double> tw = trapezoid_weights(grid_, i);
        double volume = tw[i] * fx0_[i];
        for (std::size_t j = 0; j < i; ++j) {
            volume += tw[j] * solver_rule_.integrate(0.0, theta[i] - theta[j], Boundary::Neumann, fx_[j]);
        }

        const double left = inv_sqrt_pi * singular + regular;
        out.values[i] = initial + left + right + volume;
        if (terms != nullptr) {
            terms->initial[i] = initial;
            terms->left[i] = left;
            terms->right[i] = right;
            terms->volume[i] = volume;
        }
    }
    return out;
}

FluxTrace flux_left(const ProblemData& problem, const Coefficient& a) {
    return FluxOperator(problem, a.grid()).flux(a);
}

namespace {

// Boundary-layer kernel d/dxi G1 at xi = 0 (offset 0) or xi = h (offset -h):
//   sum_n y/(2 sqrt(pi) D^{3/2}) exp(-y^2/(4D)),  y = x + offset + 2nh.
double layer_kernel(double x, double offset, double h, double D) {
    const ImageRange r = image_range(GreenParams{Boundary::Dirichlet, h, 1e-16}, D);
    const double c = 1.0 / (2.0 * std::sqrt(std::numbers::pi) * D * std::sqrt(D));
    double s = 0.0;
    for (int n = r.lo; n <= r.hi; ++n) {
        const double y = x + offset + 2.0 * n * h;
        s += y * std::exp(-y * y / (4.0 * D));
    }
    return c * s;
}

// Time integral of layer_kernel against a over [0, t]: the layer potential of
// a unit density, sum_n sign(y) erfc(|y| / (2 sqrt(theta))).
double layer_unit(double x, double offset, double h, double theta) {
    const ImageRange r = image_range(GreenParams{Boundary::Dirichlet, h, 1e-16}, theta);
    const double sd = 2.0 * std::sqrt(theta);
    double s = 0.0;
    for (int n = r.lo; n <= r.hi; ++n) {
        const double y = x + offset + 2.0 * n * h;
        if (y != 0.0) {
            s += (y > 0.0 ? 1.0 : -1.0) * std::erfc(std::abs(y) / sd);
        }
    }
    return s;
}

} // namespace

TemperatureField evaluate_u(const ProblemData& problem, const Coefficient& a, std::span<const double> x,
                            std::size_t x_panels) {
    problem.validate();
    require_positive_coefficient(a);
    const double h = problem.h;
    for (double v : x) {
        if (!(v >= 0.0 && v <= h)) {
            throw InputError("evaluation points must lie in [0, h]");
        }
    }
    const TimeGrid& grid = a.grid();
    if (std::abs(grid.horizon() - problem.T) > 1e-12 * problem.T) {
        throw InputError("coefficient grid must span [0, T] of the problem");
    }
    const Theta theta = Theta::accumulate(a);
    const SpatialRule data_rule(problem.x_grid);
    const SpatialRule::Prepared phi = data_rule.prepare(problem.phi);
    const SpatialRule volume_rule(uniform_nodes(h, x_panels));
    const std::size_t nx = x.size();
    const std::size_t n = grid.size();
    TemperatureField field{std::vector<double>(x.begin(), x.end()), grid, std::vector<double>(nx * n)};

    // Source slices on the solver x-grid at every solver node.
    const auto xs = volume_rule.nodes();
    std::vector<std::vector<double>> source(n, std::vector<double>(xs.size()));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < xs.size(); ++k) {
            source[j][k] = problem.f_at(xs[k], grid[j]);
        }
    }

    for (std::size_t ix = 0; ix < nx; ++ix) {
        field.at(ix, 0) = problem.phi_at(x[ix]);
    }

    constexpr int kLevels = 24;
    std::vector<double> shifted(xs.size());
    for (std::size_t i = 1; i < n; ++i) {
        const double ti = grid[i];
        const TimePoints pts = time_points(theta, i, kLevels);
        const std::size_t m = pts.size();
        const double m1i = problem.mu1_at(ti);
        const double m2i = problem.mu2_at(ti);
        std::vector<double> rate(m), d1(m), d2(m);
        for (std::size_t q = 0; q < m; ++q) {
            rate[q] = theta.rate(pts.tau[q]);
            d1[q] = problem.mu1_at(pts.tau[q]) - m1i;
            d2[q] = problem.mu2_at(pts.tau[q]) - m2i;
        }
        const std::vector<double> tw = trapezoid_weights(grid, i);

        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double xv = x[ix];
            if (xv == 0.0) {
                field.at(ix, i) = m1i;
                continue;
            }
            if (xv == h) {
                field.at(ix, i) = m2i;
                continue;
            }
            const double initial = data_rule.integrate(xv, theta[i], Boundary::Dirichlet, phi);

            double b1 = m1i * layer_unit(xv, 0.0, h, theta[i]);
            double b2 = m2i * layer_unit(xv, -h, h, theta[i]);
            double vmass = 0.0;
            for (std::size_t q = 0; q < m; ++q) {
                const double D = pts.gap[q];
                const double w = pts.weight[q];
                b1 += w * layer_kernel(xv, 0.0, h, D) * rate[q] * d1[q];
                b2 += w * layer_kernel(xv, -h, h, D) * rate[q] * d2[q];
                vmass += w * volume_rule.mass(xv, D, Boundary::Dirichlet) * problem.f_at(xv, pts.tau[q]);
            }

            // Volume potential: f(x, tau) times the kernel mass is integrated
            // above with the refined rule; the remainder f(xi) - f(x) is
            // smooth in tau and uses the trapezoid rule.
            double vrest = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                const double fx = problem.f_at(xv, grid[j]);
                for (std::size_t k = 0; k < shifted.size(); ++k) {
                    shifted[k] = source[j][k] - fx;
                }
                vrest += tw[j] * volume_rule.integrate(xv, theta[i] - theta[j], Boundary::Dirichlet, shifted);
            }
            field.at(ix, i) = initial + b1 - b2 + vmass + vrest;
        }
    }
    return field;
}

} // namespace degheat
