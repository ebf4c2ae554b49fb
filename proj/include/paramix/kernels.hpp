#pragma once

#include <cstddef>
#include <string>

// Batched per-frequency kernels for the sweep inner loops. Every backend
// computes the same formulas; the scalar one is the reference.
namespace paramix::kernels {

enum class Backend { scalar, avx2 };

struct JpcArgs {
    double f_a;
    double scale_a;  // 2 / gamma_a in 1/GHz
    double scale_b;  // 2 / gamma_b in 1/GHz
    double rho;
};

struct JpcOut {
    double* t_re;
    double* t_im;
    double* ra_re;
    double* ra_im;
    double* rb_re;
    double* rb_im;
};

struct JisArgs {
    JpcArgs jpc;
    double sin_phi;
    double cos_phi;
};

// alpha is the complex b-mode line amplitude at each point.
struct JisIn {
    const double* f;
    const double* alpha_re;
    const double* alpha_im;
};

struct JisOut {
    double* s21_re;
    double* s21_im;
    double* s12_re;
    double* s12_im;
    double* s11_re;
    double* s11_im;
};

inline constexpr double kSingularTol = 1e-12;

// Returns the first index whose internal loop is singular, or -1.
using JpcFn = void (*)(const JpcArgs&, std::size_t, const double*, const JpcOut&);
using JisFn = long (*)(const JisArgs&, std::size_t, const JisIn&, const JisOut&);

void jpc_scalar(const JpcArgs& a, std::size_t n, const double* f, const JpcOut& out);
long jis_scalar(const JisArgs& a, std::size_t n, const JisIn& in, const JisOut& out);
#if defined(PARAMIX_HAVE_AVX2)
void jpc_avx2(const JpcArgs& a, std::size_t n, const double* f, const JpcOut& out);
long jis_avx2(const JisArgs& a, std::size_t n, const JisIn& in, const JisOut& out);
#endif

bool available(Backend b);
// PARAMIX_KERNEL=scalar|avx2 overrides the CPU probe.
Backend active_backend();
std::string name(Backend b);

void jpc(Backend b, const JpcArgs& a, std::size_t n, const double* f, const JpcOut& out);
long jis(Backend b, const JisArgs& a, std::size_t n, const JisIn& in, const JisOut& out);

// Vector width the backends share; parallel chunks are multiples of it so
// every point takes the same code path whatever the thread count.
inline constexpr std::size_t kLanes = 4;

}  // namespace paramix::kernels
