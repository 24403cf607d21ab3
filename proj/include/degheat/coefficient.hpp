#pragma once

#include <functional>
#include <span>
#include <vector>

#include "degheat/grid.hpp"

namespace degheat {

/// Sampled diffusivity a(t_i) on a TimeGrid together with the degeneration
/// exponent beta (a(t) ~ t^beta as t -> 0).
///
/// Between nodes the coefficient is modelled as t^beta * w(t) with w = a/t^beta
/// piecewise linear, and w constant on the first panel. This model is exact
/// for c * t^beta and reduces to plain linear interpolation for beta = 0.
class Coefficient {
public:
    /// Throws InputError on size mismatch, negative or non-finite samples, or
    /// a(0) != 0 when beta > 0.
    Coefficient(TimeGrid grid, std::vector<double> values, double beta);

    static Coefficient power_law(const TimeGrid& grid, double c, double beta);
    static Coefficient from_function(const TimeGrid& grid, const std::function<double(double)>& fn, double beta);

    /// Coefficient with prescribed weighted values w_i = a(t_i)/t_i^beta for
    /// i >= 1; entry 0 is ignored.
    static Coefficient from_weighted(const TimeGrid& grid, std::span<const double> weighted, double beta);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double beta() const noexcept { return beta_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Weighted samples a(t_i)/t_i^beta; entry 0 repeats entry 1.
    std::span<const double> weighted() const noexcept { return weights_; }
    double weighted(std::size_t i) const noexcept { return weights_[i]; }

    /// Value at an arbitrary t in [0, T] under the power-weighted model.
    double at(double t) const noexcept;

private:
    TimeGrid grid_;
    std::vector<double> values_;
    std::vector<double> weights_;
    double beta_;
};

/// Weighted sup distance max_{i>=1} |a_i - b_i| / t_i^beta over a shared grid.
double weighted_distance(const Coefficient& a, const Coefficient& b);

} // namespace degheat
