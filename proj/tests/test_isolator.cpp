#include "paramix/analysis.hpp"
#include "paramix/error.hpp"
#include "paramix/isolator.hpp"
#include "support.hpp"

using namespace paramix;
using test::max_abs;

namespace {

// Reference scattering matrix at t = 1/sqrt2, alpha = beta = 1/sqrt2, phi = -pi/2, phi_s = pi/2.
Eigen::MatrixXcd reference_5050() {
    const double r2 = kSqrt2;
    Eigen::MatrixXcd m(4, 4);
    m << 0.0, 0.0, -1.0 / r2, -1.0 / r2,
        kI * 2.0 * r2 / 3.0, 0.0, -kI / (3.0 * r2), kI / (3.0 * r2),
        -1.0 / (3.0 * r2), -kI / r2, -r2 / 3.0, r2 / 3.0,
        1.0 / (3.0 * r2), -kI / r2, r2 / 3.0, -r2 / 3.0;
    return m;
}

Eigen::MatrixXcd transparency() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(1, 0) = m(0, 1) = kI;
    m(2, 2) = m(3, 3) = -1.0;
    return m;
}

}  // namespace

TEST_CASE("closed form reproduces the 50:50 and pump-off matrices") {
    const double h = 1.0 / kSqrt2;
    const ScatteringMatrix m = closed_form_4port(h, h, h, -kPi / 2, kPi / 2);
    CHECK(max_abs(m.s, reference_5050()) < 1e-15);
    CHECK(std::abs(m.at("3", "2")) == doctest::Approx(h));
    CHECK(std::abs(m.at("4", "2")) == doctest::Approx(h));
    // Column 1 power: 8/9 + 1/18 + 1/18.
    CHECK(m.s.col(0).squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(check_unitarity(m, 1e-12).ok);
    CHECK(closed_form_4port(0.0, h, h, 0.4, 2.0).s == transparency());
    CHECK_THROWS_AS(closed_form_4port(0.5, 1.0, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("composed network reproduces the 50:50 and pump-off matrices") {
    const double h = 1.0 / kSqrt2;
    CHECK(max_abs(composed_4port(h, h, h, -kPi / 2, kPi / 2).s, reference_5050()) < 1e-9);
    CHECK(max_abs(composed_4port(0.0, h, h, 0.4, 2.0).s, transparency()) < 1e-15);
}

TEST_CASE("reversing phi swaps the transmission directions") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0), up(-kPi, kPi);
    for (int k = 0; k < 200; ++k) {
        const double t = u(rng), a = u(rng), b = std::sqrt(1.0 - a * a), phi = up(rng), ps = up(rng);
        if (b == 0.0) continue;
        const auto x = closed_form_4port(t, a, b, phi, ps).s;
        const auto y = closed_form_4port(t, a, b, phi + kPi, ps).s;
        CHECK(std::abs(std::abs(x(1, 0)) - std::abs(y(0, 1))) < 1e-12);
        CHECK(std::abs(std::abs(x(0, 1)) - std::abs(y(1, 0))) < 1e-12);
    }
}

TEST_CASE("on-resonance two-port") {
    const double h = 1.0 / kSqrt2;
    const TwoPort p = on_resonance_2port(h, -kPi / 2);
    CHECK(std::abs(p.S21 - kI * 2.0 * kSqrt2 / 3.0) < 1e-15);
    CHECK(std::abs(p.S12) < 1e-16);
    CHECK(std::abs(p.S11) < 1e-16);
    const TwoPort off = on_resonance_2port(0.0, 1.0);
    CHECK(off.S21 == kI);
    CHECK(off.S12 == kI);
    const double t = 0.6;
    const TwoPort rec = on_resonance_2port(t, 0.0);
    CHECK(std::abs(rec.S21 - rec.S12) < 1e-15);
    CHECK(std::abs(rec.S11 - (-kI * kSqrt2 * t * t / (1.0 + t * t))) < 1e-15);
}

TEST_CASE("effective two-port agrees with the composed network at every frequency") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.05, 0.95), df(-0.12, 0.12);
    for (int k = 0; k < 40; ++k) {
        JisConfig c = device_preset(u(rng));
        c.alpha = u(rng);
        set_pump_port(c, k % 2 ? PumpPort::P2 : PumpPort::P1);
        const double f = c.jpc1.f_a + df(rng);
        const TwoPort e = effective_2port_point(c, f);
        const ScatteringMatrix m = composed_4port(c, f);
        CHECK(std::abs(e.S21 - m.at("2", "1")) < 1e-12);
        CHECK(std::abs(e.S12 - m.at("1", "2")) < 1e-12);
        CHECK(std::abs(e.S11 - m.at("1", "1")) < 1e-12);
        CHECK(std::abs(e.S22 - m.at("2", "2")) < 1e-12);
    }
}

TEST_CASE("effective two-port limits") {
    JisConfig c = device_preset(0.0);
    for (double f : {6.7, 6.84, 6.95}) {
        const TwoPort p = effective_2port_point(c, f);
        CHECK(std::abs(std::abs(p.S21) - 1.0) < 1e-13);
        CHECK(std::abs(p.S21 - p.S12) < 1e-13);
    }
    // The ideal 50:50 device with a lossless-quarter-free line reduces to the on-resonance model.
    c = default_config();
    c.alpha = 1.0 / kSqrt2;
    c.delay.length_um = 0.0;
    const TwoPort on = effective_2port_point(c, c.jpc1.f_a);
    const JisPhases ph = phases(c);
    const TwoPort ref = on_resonance_2port(t_on_resonance(c.jpc1.rho), ph.phi);
    CHECK(std::abs(on.S21 - ref.S21) < 1e-14);
    CHECK(std::abs(on.S12 - ref.S12) < 1e-14);
}

TEST_CASE("pump ports swap transmissions point-wise") {
    JisConfig c = device_preset();
    const auto grid = default_grid(c);
    const auto a = effective_2port_sweep(c, grid);
    set_pump_port(c, PumpPort::P2);
    const auto b = effective_2port_sweep(c, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        REQUIRE(a[k].S21 == b[k].S12);
        REQUIRE(a[k].S12 == b[k].S21);
    }
}

TEST_CASE("sweeps do not depend on the worker count or backend") {
    const JisConfig c = device_preset();
    const auto grid = linear_grid(6.7, 6.98, 1003);
    std::vector<TwoPort> one, many, scalar;
    {
        test::EnvGuard g("PARAMIX_THREADS", "1");
        one = effective_2port_sweep(c, grid);
    }
    {
        test::EnvGuard g("PARAMIX_THREADS", "3");
        many = effective_2port_sweep(c, grid);
    }
    {
        test::EnvGuard g("PARAMIX_KERNEL", "scalar");
        scalar = effective_2port_sweep(c, grid);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        REQUIRE(one[k].S21 == many[k].S21);
        REQUIRE(one[k].S12 == many[k].S12);
        CHECK(std::abs(one[k].S21 - scalar[k].S21) < 1e-13);
    }
    test::EnvGuard bad("PARAMIX_THREADS", "zero");
    CHECK_THROWS_AS(effective_2port_sweep(c, grid), ConfigError);
}

TEST_CASE("phases follow pump port and flux parity") {
    JisConfig c = default_config();
    JisPhases p = phases(c);
    CHECK(p.parity == 0);
    CHECK(p.phi == doctest::Approx(-kPi / 2));
    set_pump_port(c, PumpPort::P2);
    CHECK(phases(c).phi == doctest::Approx(kPi / 2));
    c.jpc2.phi_ext = -c.jpc2.phi_ext;
    p = phases(c);
    CHECK(p.parity == 1);
    CHECK(std::sin(p.phi) == doctest::Approx(-1.0));
}

TEST_CASE("added noise") {
    CHECK(added_noise(1.0) == 0.0);
    CHECK(added_noise(8.0 / 9.0) == 0.0625);
    CHECK(added_noise(std::pow(10.0, -0.2)) == doctest::Approx(0.2924).epsilon(0.002));
    CHECK_THROWS_AS(added_noise(0.0), DomainError);
    CHECK_THROWS_AS(added_noise(1.1), DomainError);
}

TEST_CASE("configuration validation") {
    JisConfig c = default_config();
    c.alpha = 1.2;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = default_config();
    c.jpc2.gamma_a = 55.0;
    CHECK_NOTHROW(validate(c));
    CHECK_THROWS(effective_2port_sweep(c, {6.84}));
}
