#include <immintrin.h>

#include "paramix/kernels.hpp"

namespace paramix::kernels {

namespace {

struct V2 {
    __m256d re, im;
};

inline V2 mul(V2 x, V2 y) {
    return {_mm256_fmsub_pd(x.re, y.re, _mm256_mul_pd(x.im, y.im)),
            _mm256_fmadd_pd(x.re, y.im, _mm256_mul_pd(x.im, y.re))};
}

inline V2 sub(V2 x, V2 y) { return {_mm256_sub_pd(x.re, y.re), _mm256_sub_pd(x.im, y.im)}; }

inline __m256d norm(V2 x) { return _mm256_fmadd_pd(x.re, x.re, _mm256_mul_pd(x.im, x.im)); }

inline V2 div(V2 x, V2 y) {
    const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), norm(y));
    return {_mm256_mul_pd(_mm256_fmadd_pd(x.re, y.re, _mm256_mul_pd(x.im, y.im)), inv),
            _mm256_mul_pd(_mm256_fmsub_pd(x.im, y.re, _mm256_mul_pd(x.re, y.im)), inv)};
}

struct Resp {
    V2 t, ra, rb;
};

inline Resp jpc4(const JpcArgs& a, __m256d f) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d r2 = _mm256_set1_pd(a.rho * a.rho);
    const __m256d d = _mm256_sub_pd(f, _mm256_set1_pd(a.f_a));
    const __m256d u = _mm256_mul_pd(d, _mm256_set1_pd(a.scale_a));
    const __m256d v = _mm256_mul_pd(d, _mm256_set1_pd(a.scale_b));
    const __m256d uv = _mm256_mul_pd(u, v);
    // chi_a^-1 chi_b^-1 + rho^2 = (1 - uv + rho^2) - i (u + v)
    const V2 den{_mm256_add_pd(_mm256_sub_pd(one, uv), r2),
                 _mm256_sub_pd(_mm256_setzero_pd(), _mm256_add_pd(u, v))};
    const __m256d nre = _mm256_sub_pd(_mm256_add_pd(one, uv), r2);
    const V2 two_rho{_mm256_set1_pd(2.0 * a.rho), _mm256_setzero_pd()};
    const V2 na{nre, _mm256_sub_pd(u, v)};
    const V2 nb{nre, _mm256_sub_pd(v, u)};
    return {div(two_rho, den), div(na, den), div(nb, den)};
}

}  // namespace

void jpc_avx2(const JpcArgs& a, std::size_t n, const double* f, const JpcOut& out) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const Resp r = jpc4(a, _mm256_loadu_pd(f + k));
        _mm256_storeu_pd(out.t_re + k, r.t.re);
        _mm256_storeu_pd(out.t_im + k, r.t.im);
        _mm256_storeu_pd(out.ra_re + k, r.ra.re);
        _mm256_storeu_pd(out.ra_im + k, r.ra.im);
        _mm256_storeu_pd(out.rb_re + k, r.rb.re);
        _mm256_storeu_pd(out.rb_im + k, r.rb.im);
    }
    if (k < n) {
        const JpcOut tail{out.t_re + k, out.t_im + k, out.ra_re + k, out.ra_im + k, out.rb_re + k, out.rb_im + k};
        jpc_scalar(a, n - k, f + k, tail);
    }
}

long jis_avx2(const JisArgs& a, std::size_t n, const JisIn& in, const JisOut& out) {
    long bad = -1;
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sphi = _mm256_set1_pd(a.sin_phi);
    const __m256d cphi = _mm256_set1_pd(a.cos_phi);
    const __m256d tol2 = _mm256_set1_pd(kSingularTol * kSingularTol);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const Resp r = jpc4(a.jpc, _mm256_loadu_pd(in.f + k));
        const V2 alpha{_mm256_loadu_pd(in.alpha_re + k), _mm256_loadu_pd(in.alpha_im + k)};
        const V2 rba = mul(r.rb, alpha);
        const V2 den = sub(V2{one, _mm256_setzero_pd()}, mul(rba, rba));
        // Ordered-not-less also catches NaN denominators.
        const int singular = _mm256_movemask_pd(_mm256_cmp_pd(norm(den), tol2, _CMP_NGE_UQ));
        if (singular && bad < 0) bad = static_cast<long>(k) + __builtin_ctz(static_cast<unsigned>(singular));
        const V2 common = div(mul(alpha, mul(r.t, r.t)), den);
        const V2 refl = sub(r.ra, mul(rba, common));
        const V2 sc{_mm256_mul_pd(sphi, common.re), _mm256_mul_pd(sphi, common.im)};
        const V2 minus{_mm256_sub_pd(refl.re, sc.re), _mm256_sub_pd(refl.im, sc.im)};
        const V2 plus{_mm256_add_pd(refl.re, sc.re), _mm256_add_pd(refl.im, sc.im)};
        // i * z = (-z.im, z.re); -i * c * z = (c z.im, -c z.re)
        _mm256_storeu_pd(out.s21_re + k, _mm256_sub_pd(_mm256_setzero_pd(), minus.im));
        _mm256_storeu_pd(out.s21_im + k, minus.re);
        _mm256_storeu_pd(out.s12_re + k, _mm256_sub_pd(_mm256_setzero_pd(), plus.im));
        _mm256_storeu_pd(out.s12_im + k, plus.re);
        _mm256_storeu_pd(out.s11_re + k, _mm256_mul_pd(cphi, common.im));
        _mm256_storeu_pd(out.s11_im + k, _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(cphi, common.re)));
    }
    if (k < n) {
        const JisIn tin{in.f + k, in.alpha_re + k, in.alpha_im + k};
        const JisOut tout{out.s21_re + k, out.s21_im + k, out.s12_re + k,
                          out.s12_im + k, out.s11_re + k, out.s11_im + k};
        const long tb = jis_scalar(a, n - k, tin, tout);
        if (tb >= 0 && bad < 0) bad = static_cast<long>(k) + tb;
    }
    return bad;
}

}  // namespace paramix::kernels
