#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "degheat/kernels.hpp"

namespace degheat::kernels {
namespace {

constexpr double kCutoff = 36.8413614879; // ln(1e16)

// exp for a vector of arguments. Cody-Waite reduction x = k ln2 + r with
// |r| <= ln2/2, degree-13 Taylor polynomial for e^r, then scaling by 2^k in
// two halves so that results in the subnormal range stay correct.
inline __m256d exp4(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d lo_limit = _mm256_set1_pd(-745.2);
    const __m256d hi_limit = _mm256_set1_pd(709.7);

    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);
    const __m256d k = _mm256_round_pd(_mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2hi, xc);
    r = _mm256_fnmadd_pd(k, ln2lo, r);

    static constexpr double c[] = {
        1.0 / 6227020800.0, // 1/13!
        1.0 / 479001600.0,  1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0, 1.0 / 40320.0,
        1.0 / 5040.0,       1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,     1.0 / 6.0,
        0.5,                1.0,              1.0,
    };
    __m256d p = _mm256_set1_pd(c[0]);
    for (int i = 1; i < 14; ++i) {
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));
    }

    const __m256d magic = _mm256_set1_pd(6755399441055744.0); // 1.5 * 2^52
    const __m256d k1 = _mm256_floor_pd(_mm256_mul_pd(k, _mm256_set1_pd(0.5)));
    const __m256d k2 = _mm256_sub_pd(k, k1);
    const __m256i bias = _mm256_set1_epi64x(1023);
    auto pow2 = [&](__m256d e) {
        __m256i bits = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(e, magic)), _mm256_castpd_si256(magic));
        bits = _mm256_slli_epi64(_mm256_add_epi64(bits, bias), 52);
        return _mm256_castsi256_pd(bits);
    };
    __m256d y = _mm256_mul_pd(_mm256_mul_pd(p, pow2(k1)), pow2(k2));
    const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-745.1), _CMP_LT_OQ);
    return _mm256_andnot_pd(underflow, y);
}

void vexp(const double* x, double* out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out + k, exp4(_mm256_loadu_pd(x + k)));
    }
    if (k < n) {
        alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t j = k; j < n; ++j) {
            buf[j - k] = x[j];
        }
        _mm256_store_pd(buf, exp4(_mm256_load_pd(buf)));
        for (std::size_t j = k; j < n; ++j) {
            out[j] = buf[j - k];
        }
    }
}

void inv_sqrt(const double* x, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out + k, _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_loadu_pd(x + k))));
    }
    for (; k < n; ++k) {
        out[k] = 1.0 / std::sqrt(x[k]);
    }
}

void green_batch(const double* xi, double* out, std::size_t n, double x, double inv4d, double two_h, int nlo,
                 int nhi, double sign, double pref) {
    const __m256d vx = _mm256_set1_pd(x);
    const __m256d vinv = _mm256_set1_pd(-inv4d);
    const __m256d vsign = _mm256_set1_pd(sign);
    const __m256d vpref = _mm256_set1_pd(pref);
    auto block = [&](__m256d z) {
        __m256d s = _mm256_setzero_pd();
        const __m256d d1 = _mm256_sub_pd(vx, z);
        const __m256d d2 = _mm256_add_pd(vx, z);
        for (int m = nlo; m <= nhi; ++m) {
            const __m256d shift = _mm256_set1_pd(m * two_h);
            const __m256d y1 = _mm256_add_pd(d1, shift);
            const __m256d y2 = _mm256_add_pd(d2, shift);
            const __m256d e1 = exp4(_mm256_mul_pd(_mm256_mul_pd(y1, y1), vinv));
            const __m256d e2 = exp4(_mm256_mul_pd(_mm256_mul_pd(y2, y2), vinv));
            s = _mm256_add_pd(s, _mm256_fmadd_pd(vsign, e2, e1));
        }
        return _mm256_mul_pd(vpref, s);
    };
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out + k, block(_mm256_loadu_pd(xi + k)));
    }
    if (k < n) {
        alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t j = k; j < n; ++j) {
            buf[j - k] = xi[j];
        }
        _mm256_store_pd(buf, block(_mm256_load_pd(buf)));
        for (std::size_t j = k; j < n; ++j) {
            out[j] = buf[j - k];
        }
    }
}

void boundary_series(const double* D, double* rem, double* far, std::size_t n, double h) {
    const double h2 = h * h;
    const double skip = 4.0 * kCutoff + 8.0;
    alignas(32) double dbuf[4];
    alignas(32) double rbuf[4];
    alignas(32) double gbuf[4];
    for (std::size_t k = 0; k < n; k += 4) {
        const std::size_t w = n - k < 4 ? n - k : 4;
        double dmax = 0.0;
        bool any = false;
        for (std::size_t j = 0; j < 4; ++j) {
            const double d = j < w ? D[k + j] : 0.0;
            const bool live = d > 0.0 && !(h2 / d > skip);
            dbuf[j] = live ? d : 1.0;
            if (live) {
                any = true;
                dmax = d > dmax ? d : dmax;
            }
        }
        if (!any) {
            for (std::size_t j = 0; j < w; ++j) {
                rem[k + j] = 0.0;
                far[k + j] = 0.0;
            }
            continue;
        }
        const int mmax = static_cast<int>(std::sqrt((kCutoff + 2.0) * dmax / h2)) + 1;
        const __m256d vd = _mm256_load_pd(dbuf);
        const __m256d neg_h2_over_d = _mm256_div_pd(_mm256_set1_pd(-h2), vd);
        __m256d r = _mm256_setzero_pd();
        __m256d g = _mm256_setzero_pd();
        for (int m = 0; m <= mmax; ++m) {
            const double odd = 2.0 * m + 1.0;
            g = _mm256_add_pd(g, exp4(_mm256_mul_pd(_mm256_set1_pd(0.25 * odd * odd), neg_h2_over_d)));
            if (m >= 1) {
                r = _mm256_add_pd(r, exp4(_mm256_mul_pd(_mm256_set1_pd(static_cast<double>(m) * m), neg_h2_over_d)));
            }
        }
        const __m256d pref =
            _mm256_div_pd(_mm256_set1_pd(2.0), _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(std::numbers::pi), vd)));
        _mm256_store_pd(rbuf, _mm256_mul_pd(pref, r));
        _mm256_store_pd(gbuf, _mm256_mul_pd(pref, g));
        for (std::size_t j = 0; j < w; ++j) {
            const double d = D[k + j];
            const bool live = d > 0.0 && !(h2 / d > skip);
            rem[k + j] = live ? rbuf[j] : 0.0;
            far[k + j] = live ? gbuf[j] : 0.0;
        }
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; k < n; ++k) {
        s += a[k] * b[k];
    }
    return s;
}

} // namespace

const Table& avx2_table() noexcept {
    static const Table table{vexp, inv_sqrt, green_batch, boundary_series, dot};
    return table;
}

} // namespace degheat::kernels
