#include "ncstune/kernels.hpp"

namespace ncstune::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_table();
#endif
#if defined(__aarch64__)
const Ops* neon_ops_table();
#endif

const Ops* simd_ops() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_ops_table();
    return nullptr;
#elif defined(__aarch64__)
    return neon_ops_table();
#else
    return nullptr;
#endif
}

namespace {
const Ops* g_active = nullptr;
}

const Ops& active_ops() {
    if (!g_active) {
        const Ops* simd = simd_ops();
        g_active = simd ? simd : &scalar_ops();
    }
    return *g_active;
}

void set_active_ops(const Ops& ops) { g_active = &ops; }

}  // namespace ncstune::kernels
