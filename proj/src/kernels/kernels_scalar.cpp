#include <cmath>
#include <numbers>

#include "degheat/kernels.hpp"

namespace degheat::kernels {
namespace {

constexpr double kCutoff = 36.8413614879; // ln(1e16)

void vexp(const double* x, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = std::exp(x[k]);
    }
}

void inv_sqrt(const double* x, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = 1.0 / std::sqrt(x[k]);
    }
}

void green_batch(const double* xi, double* out, std::size_t n, double x, double inv4d, double two_h, int nlo,
                 int nhi, double sign, double pref) {
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = nlo; m <= nhi; ++m) {
            const double shift = m * two_h;
            const double y1 = x - xi[k] + shift;
            const double y2 = x + xi[k] + shift;
            s += std::exp(-y1 * y1 * inv4d) + sign * std::exp(-y2 * y2 * inv4d);
        }
        out[k] = pref * s;
    }
}

void boundary_series(const double* D, double* rem, double* far, std::size_t n, double h) {
    const double h2 = h * h;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = D[k];
        if (!(d > 0.0) || h2 / d > 4.0 * kCutoff + 8.0) {
            rem[k] = 0.0;
            far[k] = 0.0;
            continue;
        }
        const double pref = 2.0 / std::sqrt(std::numbers::pi * d);
        double r = 0.0;
        double g = 0.0;
        for (int m = 0;; ++m) {
            const double odd = 2.0 * m + 1.0;
            const double eg = std::exp(-odd * odd * h2 / (4.0 * d));
            const double er = m >= 1 ? std::exp(-static_cast<double>(m) * m * h2 / d) : 0.0;
            g += eg;
            r += er;
            if (m >= 1 && static_cast<double>(m) * m * h2 / d > kCutoff + 2.0) {
                break;
            }
        }
        rem[k] = pref * r;
        far[k] = pref * g;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        s += a[k] * b[k];
    }
    return s;
}

} // namespace

const Table& scalar_table() noexcept {
    static const Table table{vexp, inv_sqrt, green_batch, boundary_series, dot};
    return table;
}

} // namespace degheat::kernels
