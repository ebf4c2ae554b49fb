#include <vector>

#include "paramix/kernels.hpp"
#include "paramix/mixer.hpp"
#include "support.hpp"

using namespace paramix;
namespace kn = paramix::kernels;

namespace {

struct JpcBuf {
    explicit JpcBuf(std::size_t n) : v(6 * n) {
        const auto p = [&](int k) { return v.data() + k * n; };
        out = {p(0), p(1), p(2), p(3), p(4), p(5)};
    }
    std::vector<double> v;
    kn::JpcOut out;
};

struct JisBuf {
    explicit JisBuf(std::size_t n) : v(6 * n) {
        const auto p = [&](int k) { return v.data() + k * n; };
        out = {p(0), p(1), p(2), p(3), p(4), p(5)};
    }
    std::vector<double> v;
    kn::JisOut out;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("scalar mixer kernel matches the complex reference") {
    JpcParams p;
    p.rho = 0.41;
    const std::size_t n = 257;
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = p.f_a - 0.2 + 0.4 * k / (n - 1);
    JpcBuf b(n);
    const kn::JpcArgs a{p.f_a, 2.0 / (p.gamma_a * 1e-3), 2.0 / (p.gamma_b * 1e-3), p.rho};
    kn::jpc_scalar(a, n, f.data(), b.out);
    for (std::size_t k = 0; k < n; ++k) {
        const JpcResponse r = response(f[k], p);
        CHECK(std::abs(cplx(b.out.t_re[k], b.out.t_im[k]) - r.t) < 1e-14);
        CHECK(std::abs(cplx(b.out.ra_re[k], b.out.ra_im[k]) - r.r_a) < 1e-14);
        CHECK(std::abs(cplx(b.out.rb_re[k], b.out.rb_im[k]) - r.r_b) < 1e-14);
    }
}

TEST_CASE("backend selection") {
    CHECK(kn::available(kn::Backend::scalar));
    CHECK(kn::name(kn::Backend::scalar) == "scalar");
    {
        test::EnvGuard g("PARAMIX_KERNEL", "scalar");
        CHECK(kn::active_backend() == kn::Backend::scalar);
    }
    {
        test::EnvGuard g("PARAMIX_KERNEL", "bogus");
        CHECK_THROWS(kn::active_backend());
    }
}

#if defined(PARAMIX_HAVE_AVX2)
TEST_CASE("vector kernels agree with the scalar reference") {
    if (!kn::available(kn::Backend::avx2)) {
        MESSAGE("AVX2 not available on this CPU; skipped");
        return;
    }
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u01(0.0, 1.0), df(-0.3, 0.3), up(-kPi, kPi);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 1001u}) {
        const kn::JpcArgs a{6.84, 2.0 / 0.04, 2.0 / 0.1, u01(rng)};
        std::vector<double> f(n), are(n), aim(n);
        for (std::size_t k = 0; k < n; ++k) {
            f[k] = 6.84 + df(rng);
            const cplx al = std::polar(0.05 + 0.9 * u01(rng), up(rng));
            are[k] = al.real();
            aim[k] = al.imag();
        }
        JpcBuf s(n), v(n);
        kn::jpc_scalar(a, n, f.data(), s.out);
        kn::jpc_avx2(a, n, f.data(), v.out);
        double worst = 0.0;
        for (std::size_t k = 0; k < s.v.size(); ++k) worst = std::max(worst, rel(s.v[k], v.v[k]));
        CHECK(worst < 1e-13);

        const double phi = up(rng);
        const kn::JisArgs ja{a, std::sin(phi), std::cos(phi)};
        const kn::JisIn in{f.data(), are.data(), aim.data()};
        JisBuf js(n), jv(n);
        const long bs = kn::jis_scalar(ja, n, in, js.out);
        const long bv = kn::jis_avx2(ja, n, in, jv.out);
        CHECK(bs == bv);
        worst = 0.0;
        for (std::size_t k = 0; k < js.v.size(); ++k) worst = std::max(worst, rel(js.v[k], jv.v[k]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("vector kernels report the same singular point") {
    if (!kn::available(kn::Backend::avx2)) return;
    // No pump and a unit line on resonance: r_b = 1 and alpha = 1 close a lossless loop at index 6.
    const std::size_t n = 9;
    std::vector<double> f(n, 6.84), are(n, 0.5), aim(n, 0.0);
    are[6] = 1.0;
    const kn::JisArgs ja{{6.84, 50.0, 20.0, 0.0}, -1.0, 0.0};
    const kn::JisIn in{f.data(), are.data(), aim.data()};
    JisBuf js(n), jv(n);
    CHECK(kn::jis_scalar(ja, n, in, js.out) == 6);
    CHECK(kn::jis_avx2(ja, n, in, jv.out) == 6);
}
#endif
