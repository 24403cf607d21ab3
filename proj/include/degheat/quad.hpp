#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "degheat/greens.hpp"

namespace degheat {

/// Gauss-Legendre rule mapped to [0, 1]. Supported sizes: 4, 8, 16, 64.
struct GaussRule {
    std::span<const double> x;
    std::span<const double> w;
};
GaussRule gauss_legendre(std::size_t n);

/// int_0^1 dz / sqrt(1 - z^(beta+1)). Throws InputError for beta < 0.
double I1(double beta);

/// Quadrature points in tau for integrals over [0, t_i] of
/// kernel(theta(t_i) - theta(tau)) * g(tau).
///
/// Every panel before the last uses 16-point Gauss-Legendre in tau. The last
/// panel [t_{i-1}, t_i] uses tau = t_i - width * u^2, which turns an inverse
/// square-root singularity at tau = t_i into a smooth integrand in u; with
/// `levels` > 0 the u-interval is additionally split geometrically towards
/// u = 0 (8-point rule per piece) for kernels that are sharply peaked there.
///
/// For piecewise-linear g with node values g_j the integral is
///   sum_k kernel(gap[k]) * (left[k] * g[panel[k]] + right[k] * g[panel[k] + 1]),
/// and for a general g it is sum_k kernel(gap[k]) * weight[k] * g(tau[k]).
struct TimePoints {
    std::vector<double> tau;
    std::vector<double> gap;
    std::vector<double> weight;
    std::vector<double> left;
    std::vector<double> right;
    std::vector<std::uint32_t> panel;

    std::size_t size() const noexcept { return tau.size(); }
};

TimePoints time_points(const Theta& theta, std::size_t i, int levels = 0);

/// Product-integration weights for int_0^{t_i} g / sqrt(theta(t_i) - theta(tau)) dtau
/// with g piecewise linear on the grid.
struct SingularRule {
    std::size_t target = 0;
    std::vector<double> weights; // one per node 0..target
};

/// Throws InputError for target = 0 and SolverError when theta is flat on a
/// panel inside the range.
SingularRule build_singular_rule(const Theta& theta, std::size_t target);

double singular_integral(std::span<const double> g, const Theta& theta, std::size_t target);

/// Integrals int_0^h G_k(x, xi; d) g(xi) dxi for g piecewise linear on a
/// fixed x-grid.
///
/// Narrow kernels (sqrt(d) comparable to the mesh width) are integrated
/// exactly, image by image, with erf and Gaussian moments on each panel.
/// Wide kernels use 4-point Gauss-Legendre per panel.
class SpatialRule {
public:
    explicit SpatialRule(std::vector<double> nodes);

    struct Prepared {
        std::vector<double> g;
        std::vector<double> wg; // g times Gauss weights at the wide-rule points
        bool constant = false;
        bool zero = false;
    };

    Prepared prepare(std::span<const double> g) const;

    double integrate(double x, double d, Boundary kind, const Prepared& g) const;
    double integrate(double x, double d, Boundary kind, std::span<const double> g) const;

    /// int_0^h G_k(x, xi; d) dxi.
    double mass(double x, double d, Boundary kind) const;

    std::span<const double> nodes() const noexcept { return nodes_; }
    double length() const noexcept { return nodes_.back(); }

private:
    double exact(double x, double d, Boundary kind, std::span<const double> g) const;

    std::vector<double> nodes_;
    std::vector<double> points_;
    double max_width_ = 0.0;
};

} // namespace degheat
