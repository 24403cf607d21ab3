#include "degheat/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "degheat/error.hpp"
#include "degheat/quad.hpp"

namespace degheat {

namespace {

double tpow(double t, double beta) { return beta == 0.0 ? 1.0 : std::pow(t, beta); }

void require_positive(double d) {
    if (!(d > 0.0)) {
        throw InputError("Green function needs theta_diff > 0");
    }
}

double sign_of(Boundary k) { return k == Boundary::Dirichlet ? -1.0 : 1.0; }

} // namespace

Theta Theta::accumulate(const Coefficient& a) {
    Theta th(a.grid());
    th.beta_ = a.beta();
    th.weights_.assign(a.weighted().begin(), a.weighted().end());
    const std::size_t n = th.grid_.size();
    th.values_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        th.values_[i] = th.values_[i - 1] + th.tail(i, th.grid_.width(i - 1));
    }
    const GaussRule gl = gauss_legendre(16);
    th.points_.resize(16 * (n - 1));
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double w = th.grid_.width(j);
        for (std::size_t q = 0; q < 16; ++q) {
            th.points_[16 * j + q] = th.values_[j + 1] - th.tail(j + 1, w * (1.0 - gl.x[q]));
        }
    }
    return th;
}

double Theta::tail(std::size_t i, double s) const noexcept {
    if (s <= 0.0) {
        return 0.0;
    }
    const std::size_t j = i - 1;
    const double b = grid_[i];
    if (j == 0 && beta_ > 0.0) {
        const double e = beta_ + 1.0;
        return weights_[0] * std::pow(b, e) * (-std::expm1(e * std::log1p(-s / b))) / e;
    }
    const GaussRule gl = gauss_legendre(16);
    const double ta = grid_[j];
    const double width = grid_.width(j);
    const double wa = weights_[j];
    const double slope = (weights_[j + 1] - weights_[j]) / width;
    double sum = 0.0;
    for (std::size_t q = 0; q < 16; ++q) {
        const double tau = b - s * gl.x[q];
        sum += gl.w[q] * tpow(tau, beta_) * (wa + slope * (tau - ta));
    }
    return s * sum;
}

double Theta::at(double t) const noexcept {
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= grid_.horizon()) {
        return values_.back();
    }
    const std::size_t j = grid_.panel_of(t);
    return values_[j + 1] - tail(j + 1, grid_[j + 1] - t);
}

double Theta::rate(double t) const noexcept {
    if (t <= 0.0) {
        return beta_ > 0.0 ? 0.0 : weights_[0];
    }
    const std::size_t j = grid_.panel_of(std::min(t, grid_.horizon()));
    const double s = (std::min(t, grid_.horizon()) - grid_[j]) / grid_.width(j);
    return tpow(t, beta_) * (weights_[j] + s * (weights_[j + 1] - weights_[j]));
}

ImageRange image_range(const GreenParams& p, double theta_diff) noexcept {
    const double h = p.h;
    if (theta_diff < (h / 40.0) * (h / 40.0)) {
        return {-1, 1};
    }
    const double reach = std::sqrt(4.0 * theta_diff * std::log(1.0 / p.truncation_tol)) / (2.0 * h);
    const int n = 1 + static_cast<int>(std::ceil(reach));
    return {-n, n};
}

double green(const GreenParams& p, double x, double xi, double d) {
    require_positive(d);
    const ImageRange r = image_range(p, d);
    const double sgn = sign_of(p.kind);
    const double inv4d = 1.0 / (4.0 * d);
    double s = 0.0;
    for (int n = r.lo; n <= r.hi; ++n) {
        const double y1 = x - xi + 2.0 * n * p.h;
        const double y2 = x + xi + 2.0 * n * p.h;
        s += std::exp(-y1 * y1 * inv4d) + sgn * std::exp(-y2 * y2 * inv4d);
    }
    return s / (2.0 * std::sqrt(std::numbers::pi * d));
}

double green_dxi(const GreenParams& p, double x, double xi, double d) {
    require_positive(d);
    const ImageRange r = image_range(p, d);
    const double sgn = sign_of(p.kind);
    const double inv4d = 1.0 / (4.0 * d);
    double s = 0.0;
    for (int n = r.lo; n <= r.hi; ++n) {
        const double y1 = x - xi + 2.0 * n * p.h;
        const double y2 = x + xi + 2.0 * n * p.h;
        s += y1 * std::exp(-y1 * y1 * inv4d) - sgn * y2 * std::exp(-y2 * y2 * inv4d);
    }
    return s / (2.0 * d) / (2.0 * std::sqrt(std::numbers::pi * d));
}

double green_dx(const GreenParams& p, double x, double xi, double d) {
    require_positive(d);
    const ImageRange r = image_range(p, d);
    const double sgn = sign_of(p.kind);
    const double inv4d = 1.0 / (4.0 * d);
    double s = 0.0;
    for (int n = r.lo; n <= r.hi; ++n) {
        const double y1 = x - xi + 2.0 * n * p.h;
        const double y2 = x + xi + 2.0 * n * p.h;
        s += -y1 * std::exp(-y1 * y1 * inv4d) - sgn * y2 * std::exp(-y2 * y2 * inv4d);
    }
    return s / (2.0 * d) / (2.0 * std::sqrt(std::numbers::pi * d));
}

} // namespace degheat
