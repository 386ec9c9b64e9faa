#include "qproc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qproc::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_impl();

const Ops* avx2_ops() {
    static const Ops* ops = []() -> const Ops* {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
            return avx2_ops_impl();
        return nullptr;
    }();
    return ops;
}
#else
const Ops* avx2_ops() { return nullptr; }
#endif

const Ops& active_ops() {
    static const Ops* ops = []() -> const Ops* {
        const char* forced = std::getenv("QPROC_KERNELS");
        if (forced && std::strcmp(forced, "scalar") == 0) return &scalar_ops();
        if (forced && std::strcmp(forced, "avx2") == 0 && avx2_ops())
            return avx2_ops();
        if (const Ops* simd = avx2_ops()) return simd;
        return &scalar_ops();
    }();
    return *ops;
}

}  // namespace qproc::kernels
