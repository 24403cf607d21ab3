#include "degheat/coefficient.hpp"

#include <algorithm>
#include <cmath>

#include "degheat/error.hpp"

namespace degheat {

namespace {

double tpow(double t, double beta) { return beta == 0.0 ? 1.0 : std::pow(t, beta); }

} // namespace

Coefficient::Coefficient(TimeGrid grid, std::vector<double> values, double beta)
    : grid_(std::move(grid)), values_(std::move(values)), beta_(beta) {
    if (values_.size() != grid_.size()) {
        throw InputError("coefficient samples do not match the time grid");
    }
    if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
        throw InputError("coefficient exponent must be finite and >= 0");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InputError("coefficient sample is not finite");
        }
        if (v < 0.0) {
            throw InputError("negative coefficient sample");
        }
    }
    if (beta_ > 0.0 && values_[0] != 0.0) {
        throw InputError("coefficient must vanish at t = 0 when beta > 0");
    }
    weights_.resize(values_.size());
    for (std::size_t i = 1; i < values_.size(); ++i) {
        weights_[i] = values_[i] / tpow(grid_[i], beta_);
    }
    weights_[0] = beta_ > 0.0 ? weights_[1] : values_[0];
}

Coefficient Coefficient::power_law(const TimeGrid& grid, double c, double beta) {
    std::vector<double> w(grid.size(), c);
    return from_weighted(grid, w, beta);
}

Coefficient Coefficient::from_function(const TimeGrid& grid, const std::function<double(double)>& fn, double beta) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = fn(grid[i]);
    }
    return Coefficient(grid, std::move(v), beta);
}

Coefficient Coefficient::from_weighted(const TimeGrid& grid, std::span<const double> weighted, double beta) {
    if (weighted.size() != grid.size()) {
        throw InputError("weighted samples do not match the time grid");
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        v[i] = weighted[i] * tpow(grid[i], beta);
    }
    v[0] = beta > 0.0 ? 0.0 : weighted[0];
    return Coefficient(grid, std::move(v), beta);
}

double Coefficient::at(double t) const noexcept {
    if (t <= 0.0) {
        return values_[0];
    }
    if (t >= grid_.horizon()) {
        return values_.back();
    }
    const std::size_t j = grid_.panel_of(t);
    const double s = (t - grid_[j]) / grid_.width(j);
    const double w = weights_[j] + s * (weights_[j + 1] - weights_[j]);
    return tpow(t, beta_) * w;
}

double weighted_distance(const Coefficient& a, const Coefficient& b) {
    if (a.size() != b.size()) {
        throw InputError("coefficients live on different grids");
    }
    double m = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double tb = tpow(a.grid()[i], a.beta());
        m = std::max(m, std::abs(a[i] - b[i]) / tb);
    }
    return m;
}

} // namespace degheat
