#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "degheat/coefficient.hpp"
#include "degheat/grid.hpp"

namespace degheat {

enum class Boundary { Dirichlet = 1, Neumann = 2 };

struct GreenParams {
    Boundary kind = Boundary::Dirichlet;
    double h = 1.0;
    double truncation_tol = 1e-16;
};

/// Cumulative diffusivity theta(t) = int_0^t a, under the power-weighted
/// model of Coefficient. Besides node values it keeps theta at the 16
/// Gauss-Legendre points of every panel, which the time quadrature reuses.
class Theta {
public:
    static Theta accumulate(const Coefficient& a);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double beta() const noexcept { return beta_; }

    /// int_{t_i - s}^{t_i} a(tau) dtau for 0 <= s <= t_i - t_{i-1}, i >= 1.
    /// Computed directly (not as a difference of theta values) so that it
    /// keeps full relative accuracy as s -> 0.
    double tail(std::size_t i, double s) const noexcept;

    /// theta at any t in [0, T].
    double at(double t) const noexcept;

    /// theta at Gauss-Legendre point q (of 16) on panel j.
    double at_panel_point(std::size_t j, std::size_t q) const noexcept { return points_[16 * j + q]; }

    /// Coefficient value under the same model at any t.
    double rate(double t) const noexcept;

private:
    TimeGrid grid_;
    std::vector<double> weights_;
    std::vector<double> values_;
    std::vector<double> points_;
    double beta_ = 0.0;

    explicit Theta(TimeGrid grid) : grid_(std::move(grid)) {}
};

inline Theta accumulate_theta(const Coefficient& a) { return Theta::accumulate(a); }

/// Image indices n in [lo, hi] whose terms can exceed the truncation
/// tolerance for positions in [0, h].
struct ImageRange {
    int lo;
    int hi;
};
ImageRange image_range(const GreenParams& p, double theta_diff) noexcept;

/// G_k(x, xi; theta_diff). Throws InputError when theta_diff <= 0.
double green(const GreenParams& p, double x, double xi, double theta_diff);

/// d/dxi of G_k.
double green_dxi(const GreenParams& p, double x, double xi, double theta_diff);

/// d/dx of G_k.
double green_dx(const GreenParams& p, double x, double xi, double theta_diff);

} // namespace degheat
