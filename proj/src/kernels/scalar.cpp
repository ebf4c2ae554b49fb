#include <cmath>
#include <complex>

#include "paramix/kernels.hpp"

namespace paramix::kernels {

namespace {
using cplx = std::complex<double>;

struct Point {
    cplx t, ra, rb;
};

Point jpc_point(const JpcArgs& a, double f) {
    const double d = f - a.f_a;
    const cplx xa{1.0, -d * a.scale_a};
    const cplx xb{1.0, -d * a.scale_b};
    const double r2 = a.rho * a.rho;
    const cplx den = xa * xb + r2;
    return {2.0 * a.rho / den, (std::conj(xa) * xb - r2) / den, (xa * std::conj(xb) - r2) / den};
}
}  // namespace

void jpc_scalar(const JpcArgs& a, std::size_t n, const double* f, const JpcOut& out) {
    for (std::size_t k = 0; k < n; ++k) {
        const Point p = jpc_point(a, f[k]);
        out.t_re[k] = p.t.real();
        out.t_im[k] = p.t.imag();
        out.ra_re[k] = p.ra.real();
        out.ra_im[k] = p.ra.imag();
        out.rb_re[k] = p.rb.real();
        out.rb_im[k] = p.rb.imag();
    }
}

long jis_scalar(const JisArgs& a, std::size_t n, const JisIn& in, const JisOut& out) {
    long bad = -1;
    const cplx i{0.0, 1.0};
    for (std::size_t k = 0; k < n; ++k) {
        const Point p = jpc_point(a.jpc, in.f[k]);
        const cplx alpha{in.alpha_re[k], in.alpha_im[k]};
        const cplx rb_alpha = p.rb * alpha;
        const cplx den = 1.0 - rb_alpha * rb_alpha;
        if (!(std::abs(den) >= kSingularTol) && bad < 0) bad = static_cast<long>(k);
        // Inner two-port: s1'1' = s2'2' = refl, s2'1' = -common e^{i phi}.
        const cplx common = alpha * p.t * p.t / den;
        const cplx refl = p.ra - rb_alpha * common;
        const cplx s21 = i * (refl - a.sin_phi * common);
        const cplx s12 = i * (refl + a.sin_phi * common);
        const cplx s11 = -i * a.cos_phi * common;
        out.s21_re[k] = s21.real();
        out.s21_im[k] = s21.imag();
        out.s12_re[k] = s12.real();
        out.s12_im[k] = s12.imag();
        out.s11_re[k] = s11.real();
        out.s11_im[k] = s11.imag();
    }
    return bad;
}

}  // namespace paramix::kernels
