#include "raildyn/kernels.hpp"

#include <cstdlib>
#include <string>

namespace raildyn::kernels {

#if RAILDYN_BUILD_AVX2
const Kernels* avx2_impl();
#endif

const Kernels* avx2() {
#if RAILDYN_BUILD_AVX2
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_impl();
#endif
    return nullptr;
}

namespace {

const Kernels& select() {
    const char* env = std::getenv("RAILDYN_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return scalar();
    if (mode == "avx2") {
        if (const Kernels* k = avx2()) return *k;
        return scalar(); // requested unit unavailable; degrade rather than abort
    }
    if (const Kernels* k = avx2()) return *k;
    return scalar();
}

} // namespace

const Kernels& active() {
    static const Kernels& chosen = select();
    return chosen;
}

} // namespace raildyn::kernels
