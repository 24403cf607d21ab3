#pragma once

#include <cstddef>
#include <string_view>

/// Data-parallel inner loops with a scalar reference implementation and an
/// AVX2 variant chosen at runtime. Set DEGHEAT_KERNELS=scalar to force the
/// reference path.
namespace degheat::kernels {

enum class Backend { Scalar, Avx2 };

struct Table {
    /// out[k] = exp(x[k]); x[k] <= 0 is the only range used by the library.
    void (*vexp)(const double* x, double* out, std::size_t n);

    /// out[k] = 1 / sqrt(x[k]).
    void (*inv_sqrt)(const double* x, double* out, std::size_t n);

    /// Image-series sum for a Green function at fixed x and fixed d:
    ///   out[k] = pref * sum_{n=nlo}^{nhi} ( exp(-(x - xi[k] + n*two_h)^2 * inv4d)
    ///                                       + sign * exp(-(x + xi[k] + n*two_h)^2 * inv4d) ).
    void (*green_batch)(const double* xi, double* out, std::size_t n, double x, double inv4d,
                        double two_h, int nlo, int nhi, double sign, double pref);

    /// Regular boundary kernels of the flux formula at x = 0, for each gap D[k] > 0:
    ///   rem[k]  = 2/sqrt(pi D) * sum_{n>=1} exp(-n^2 h^2 / D)
    ///   far[k]  = 2/sqrt(pi D) * sum_{n>=0} exp(-(2n+1)^2 h^2 / (4D))
    /// Entries with D[k] <= 0 produce zeros.
    void (*boundary_series)(const double* D, double* rem, double* far, std::size_t n, double h);

    double (*dot)(const double* a, const double* b, std::size_t n);
};

const Table& active() noexcept;
Backend backend() noexcept;
bool available(Backend b) noexcept;

/// Switch the process-wide backend. Throws std::invalid_argument when the
/// requested backend is not supported on this CPU or build.
void set_backend(Backend b);

std::string_view name(Backend b) noexcept;

const Table& scalar_table() noexcept;
#if defined(DEGHEAT_HAVE_AVX2)
const Table& avx2_table() noexcept;
#endif

} // namespace degheat::kernels
