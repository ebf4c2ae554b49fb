#include <cstdlib>
#include <cstring>

#include "paramix/error.hpp"
#include "paramix/kernels.hpp"

namespace paramix::kernels {

bool available(Backend b) {
    if (b == Backend::scalar) return true;
#if defined(PARAMIX_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() {
    if (const char* env = std::getenv("PARAMIX_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!available(Backend::avx2)) throw ConfigError("PARAMIX_KERNEL=avx2 but this CPU/build lacks AVX2+FMA");
            return Backend::avx2;
        }
        throw ConfigError(std::string("unknown PARAMIX_KERNEL value '") + env + "'");
    }
    return available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::string name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void jpc(Backend b, const JpcArgs& a, std::size_t n, const double* f, const JpcOut& out) {
#if defined(PARAMIX_HAVE_AVX2)
    if (b == Backend::avx2) return jpc_avx2(a, n, f, out);
#endif
    (void)b;
    jpc_scalar(a, n, f, out);
}

long jis(Backend b, const JisArgs& a, std::size_t n, const JisIn& in, const JisOut& out) {
#if defined(PARAMIX_HAVE_AVX2)
    if (b == Backend::avx2) return jis_avx2(a, n, in, out);
#endif
    (void)b;
    return jis_scalar(a, n, in, out);
}

}  // namespace paramix::kernels
