#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "degheat/kernels.hpp"

using namespace degheat;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

void close(const std::vector<double>& a, const std::vector<double>& b, double rel) {
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k] == doctest::Approx(b[k]).epsilon(rel).scale(1e-300));
    }
}

} // namespace

TEST_CASE("initial backend honours DEGHEAT_KERNELS") {
    const char* env = std::getenv("DEGHEAT_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        CHECK(kernels::backend() == kernels::Backend::Scalar);
    } else if (kernels::available(kernels::Backend::Avx2)) {
        CHECK(kernels::backend() == kernels::Backend::Avx2);
    }
}

TEST_CASE("scalar kernels against the standard library") {
    const auto& s = kernels::scalar_table();
    std::mt19937_64 rng(7);
    const auto x = uniform(rng, 101, -700.0, 0.0);
    std::vector<double> out(x.size());
    s.vexp(x.data(), out.data(), x.size());
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(out[k] == doctest::Approx(std::exp(x[k])).epsilon(1e-14));
    const auto y = uniform(rng, 37, 1e-12, 1e6);
    std::vector<double> r(y.size());
    s.inv_sqrt(y.data(), r.data(), y.size());
    for (std::size_t k = 0; k < y.size(); ++k) CHECK(r[k] == doctest::Approx(1.0 / std::sqrt(y[k])).epsilon(1e-15));
    const auto b = uniform(rng, 101, -1.0, 1.0);
    double dot = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) dot += x[k] * b[k];
    CHECK(s.dot(x.data(), b.data(), b.size()) == doctest::Approx(dot).epsilon(1e-12));
}

TEST_CASE("boundary series zeroes nonpositive gaps") {
    const auto& s = kernels::scalar_table();
    const std::vector<double> D{-1.0, 0.0, 0.25};
    std::vector<double> rem(3, 9.0), far(3, 9.0);
    s.boundary_series(D.data(), rem.data(), far.data(), 3, 1.0);
    CHECK(rem[0] == 0.0);
    CHECK(far[1] == 0.0);
    const double pref = 2.0 / std::sqrt(M_PI * 0.25);
    CHECK(rem[2] == doctest::Approx(pref * (std::exp(-4.0) + std::exp(-16.0) + std::exp(-36.0))).epsilon(1e-12));
    CHECK(far[2] == doctest::Approx(pref * (std::exp(-1.0) + std::exp(-9.0) + std::exp(-25.0) + std::exp(-49.0))).epsilon(1e-12));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!kernels::available(kernels::Backend::Avx2)) {
        MESSAGE("AVX2 not available; skipped");
        return;
    }
    kernels::set_backend(kernels::Backend::Avx2);
    const auto& v = kernels::active();
    kernels::set_backend(kernels::Backend::Scalar);
    const auto& s = kernels::active();
    REQUIRE(&v != &s);
    std::mt19937_64 rng(20240611);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 256u, 1001u}) {
        const auto x = uniform(rng, n, -745.0, 0.0);
        std::vector<double> a(n), b(n);
        s.vexp(x.data(), a.data(), n);
        v.vexp(x.data(), b.data(), n);
        close(a, b, 1e-14);

        const auto y = uniform(rng, n, 1e-20, 1e8);
        s.inv_sqrt(y.data(), a.data(), n);
        v.inv_sqrt(y.data(), b.data(), n);
        close(a, b, 1e-15);

        const auto xi = uniform(rng, n, 0.0, 1.3);
        for (double d : {1e-8, 1e-3, 0.7}) {
            for (double sign : {-1.0, 1.0}) {
                s.green_batch(xi.data(), a.data(), n, 0.4, 1.0 / (4 * d), 2.6, -3, 3, sign, 1.0 / std::sqrt(4 * M_PI * d));
                v.green_batch(xi.data(), b.data(), n, 0.4, 1.0 / (4 * d), 2.6, -3, 3, sign, 1.0 / std::sqrt(4 * M_PI * d));
                // errors in the exponent argument are relative to the peak value
                const double peak = 14.0 / std::sqrt(4 * M_PI * d);
                for (std::size_t k = 0; k < n; ++k) {
                    CHECK(std::abs(b[k] - a[k]) <= 1e-13 * std::abs(a[k]) + 1e-15 * peak);
                }
            }
        }

        auto D = uniform(rng, n, -0.1, 3.0);
        std::vector<double> r1(n), f1(n), r2(n), f2(n);
        s.boundary_series(D.data(), r1.data(), f1.data(), n, 1.0);
        v.boundary_series(D.data(), r2.data(), f2.data(), n, 1.0);
        close(r1, r2, 1e-13);
        close(f1, f2, 1e-13);

        const auto w = uniform(rng, n, -1.0, 1.0);
        CHECK(v.dot(x.data(), w.data(), n) == doctest::Approx(s.dot(x.data(), w.data(), n)).epsilon(1e-12).scale(1e-9));
    }
}

TEST_CASE("backend selection") {
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::backend() == kernels::Backend::Scalar);
    CHECK(&kernels::active() == &kernels::scalar_table());
    CHECK(kernels::name(kernels::Backend::Scalar) == "scalar");
    CHECK(kernels::name(kernels::Backend::Avx2) == "avx2");
    if (kernels::available(kernels::Backend::Avx2)) {
        kernels::set_backend(kernels::Backend::Avx2);
        CHECK(kernels::backend() == kernels::Backend::Avx2);
    } else {
        CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2), std::invalid_argument);
    }
}
