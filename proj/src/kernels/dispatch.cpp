#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "degheat/kernels.hpp"

namespace degheat::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DEGHEAT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend() noexcept {
    const char* env = std::getenv("DEGHEAT_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        return Backend::Scalar;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

} // namespace

bool available(Backend b) noexcept {
    if (b == Backend::Scalar) {
        return true;
    }
    return cpu_has_avx2();
}

Backend backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!available(b)) {
        throw std::invalid_argument("kernel backend not available on this machine");
    }
    current().store(b, std::memory_order_relaxed);
}

const Table& active() noexcept {
#if defined(DEGHEAT_HAVE_AVX2)
    if (backend() == Backend::Avx2) {
        return avx2_table();
    }
#endif
    return scalar_table();
}

std::string_view name(Backend b) noexcept { return b == Backend::Avx2 ? "avx2" : "scalar"; }

} // namespace degheat::kernels
