#include "paramix/analysis.hpp"
#include "paramix/error.hpp"
#include "support.hpp"

using namespace paramix;

TEST_CASE("power in dB") {
    CHECK(to_power_dB(1.0) == 0.0);
    CHECK(to_power_dB(kI * 2.0 * kSqrt2 / 3.0) == doctest::Approx(10.0 * std::log10(8.0 / 9.0)).epsilon(1e-14));
    CHECK(to_power_dB(0.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("3 dB width of an analytic dip") {
    // p(f) = 1 - (1 - L) / (1 + x^2), x = 2 (f - f0) / w. The level 2L is reached at x^2 = L / (1 - 2L).
    const double f0 = 6.84, w = 0.03;
    for (double L : {0.01, 0.05, 0.2, 0.4}) {
        const auto f = linear_grid(f0 - 0.15, f0 + 0.15, 2001);
        std::vector<double> p;
        for (double x : f) p.push_back(1.0 - (1.0 - L) / (1.0 + std::pow(2.0 * (x - f0) / w, 2)));
        const Bandwidth bw = bandwidth_3dB(f, p);
        const double want = w * std::sqrt(L / (1.0 - 2.0 * L)) * 1e3;
        const double step = (f[1] - f[0]) * 1e3;
        CHECK(std::abs(bw.gamma - want) <= step);
        CHECK(std::abs(bw.f_dip - f0) <= f[1] - f[0]);
        CHECK(bw.L == doctest::Approx(L).epsilon(1e-9));
    }
}

TEST_CASE("bandwidth errors") {
    const auto f = linear_grid(6.7, 6.9, 101);
    CHECK_THROWS_AS(bandwidth_3dB(f, std::vector<double>(f.size(), 0.8)), NumericalError);
    std::vector<double> edge(f.size(), 1.0);
    edge[0] = 0.01;
    CHECK_THROWS_AS(bandwidth_3dB(f, edge), NumericalError);
    CHECK_THROWS(run_sweep(default_config(), {6.9, 6.8}));
}

TEST_CASE("device working point isolates at f_a") {
    const JisConfig c = device_preset();
    const auto grid = default_grid(c);
    REQUIRE(grid.size() == 2001);
    const SweepResult s = run_sweep(c, grid);
    CHECK(isolated_trace(c) == Trace::S12);
    const Bandwidth bw = bandwidth_3dB(s, Trace::S12);
    CHECK(std::abs(bw.f_dip - c.jpc1.f_a) <= (grid[1] - grid[0]) * (1.0 + 1e-9));
    CHECK(bw.gamma < gamma0(40.0, 100.0));
    const auto fwd = power(s, Trace::S21);
    CHECK(*std::min_element(fwd.begin(), fwd.end()) > 0.3);
}

TEST_CASE("gamma0") {
    CHECK(gamma0(40.0, 100.0) == doctest::Approx(57.142857).epsilon(1e-8));
    CHECK(gamma0(37.0, 37.0) == doctest::Approx(37.0).epsilon(1e-15));
    CHECK(gamma0(1e-9, 50.0) < 1e-8);
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(1.0, 500.0);
    for (int k = 0; k < 200; ++k) {
        const double a = u(rng), b = u(rng);
        CHECK(gamma0(a, b) == gamma0(b, a));
        CHECK(gamma0(a, b) <= std::min(2.0 * a, 2.0 * b));
    }
}

TEST_CASE("bandwidth narrows as the dip deepens") {
    const auto scan = bandwidth_attenuation_scan(device_preset(), {0.25, 0.3, 0.35, 0.4, 0.45, 0.5});
    for (std::size_t k = 1; k < scan.size(); ++k) {
        REQUIRE(scan[k].ok);
        CHECK(scan[k].bw.L < scan[k - 1].bw.L);
        CHECK(scan[k].bw.gamma < scan[k - 1].bw.gamma);
    }
    CHECK_THROWS_AS(bandwidth_attenuation_scan(device_preset(), {0.01}), NumericalError);
    const auto lenient = bandwidth_attenuation_scan(device_preset(), {0.01}, false);
    CHECK_FALSE(lenient.front().ok);
    CHECK_FALSE(lenient.front().error.empty());
}

TEST_CASE("fit recovers a synthetic device") {
    const JisConfig tmpl = device_preset();
    const PowerPair m = on_resonance_powers(tmpl, 0.414, 0.51);
    const FitResult f = fit_rho_alpha(m.s21_sq, m.s12_sq, tmpl);
    bool found = false;
    for (const auto& s : f.solutions)
        found = found || (std::abs(s.rho - 0.414) < 1e-6 && std::abs(s.alpha - 0.51) < 1e-6 && s.residual < 1e-18);
    CHECK(found);
    // Every reported exact solution really reproduces the data.
    for (const auto& s : f.solutions) {
        if (s.residual > 1e-18) continue;
        const PowerPair back = on_resonance_powers(tmpl, s.rho, s.alpha);
        CHECK(std::abs(back.s21_sq - m.s21_sq) < 1e-9);
        CHECK(std::abs(back.s12_sq - m.s12_sq) < 1e-9);
    }
    // Branch selection picks the truth deterministically.
    FitOptions opt;
    for (FitBranch b : {FitBranch::below_match, FitBranch::above_match}) {
        opt.branch = b;
        const FitResult g = fit_rho_alpha(m.s21_sq, m.s12_sq, tmpl, opt);
        CHECK(g.residual < 1e-18);
    }
}

TEST_CASE("fit without pump cannot identify alpha") {
    const JisConfig tmpl = device_preset();
    const PowerPair m = on_resonance_powers(tmpl, 0.0, 0.51);
    const FitResult f = fit_rho_alpha(m.s21_sq, m.s12_sq, tmpl);
    CHECK(f.rho < 1e-6);
    CHECK_FALSE(f.alpha_identifiable);
}

TEST_CASE("fit is independent of the worker count") {
    const JisConfig tmpl = device_preset();
    const PowerPair m = on_resonance_powers(tmpl, 0.3, 0.7);
    FitResult a, b;
    {
        test::EnvGuard g("PARAMIX_THREADS", "1");
        a = fit_rho_alpha(m.s21_sq, m.s12_sq, tmpl);
    }
    {
        test::EnvGuard g("PARAMIX_THREADS", "4");
        b = fit_rho_alpha(m.s21_sq, m.s12_sq, tmpl);
    }
    CHECK(a.rho == b.rho);
    CHECK(a.alpha == b.alpha);
    CHECK(a.solutions.size() == b.solutions.size());
}

TEST_CASE("readout formulas") {
    CHECK(theta_from_chi_kappa(0.94, 1.1) == doctest::Approx(81.0).epsilon(0.1 / 81.0));
    CHECK(theta_from_chi_kappa(1.0, 1.0) == doctest::Approx(90.0));
    CHECK(theta_from_chi_kappa(0.0, 1.0) == 0.0);
    CHECK(t_phi(60, 54) == doctest::Approx(98.18).epsilon(1e-3));
    CHECK(t_phi(55, 6) == doctest::Approx(6.346).epsilon(1e-3));
    CHECK(t_phi(std::numeric_limits<double>::infinity(), 30.0) == doctest::Approx(30.0));
    CHECK_THROWS_AS(t_phi(10, 20), NumericalError);
    CHECK(nbar_from_dephasing(98.0, 1.1, 0.94) == doctest::Approx(0.0035).epsilon(0.02));
    CHECK(nbar_from_dephasing(std::numeric_limits<double>::infinity(), 1.1, 0.94) == 0.0);
    CHECK(isolation_estimate_dB(0.04, 0.002) == doctest::Approx(13.01).epsilon(1e-3));
    CHECK(isolation_estimate_dB(0.3, 0.3) == 0.0);
    CHECK(isolation_estimate_dB(0.5, 0.05) == doctest::Approx(10.0));
    CHECK_THROWS_AS(isolation_estimate_dB(0.0, 0.1), DomainError);
}

TEST_CASE("dephasing rate and photon number are inverses") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (int k = 0; k < 100; ++k) {
        const double n = u(rng) * 0.01, kappa = u(rng), chi = u(rng);
        const double rate = dephasing_rate(n, kappa, chi);
        CHECK(std::abs(nbar_from_dephasing(1e6 / rate, kappa, chi) - n) <= 1e-12 * std::max(1.0, n));
    }
}

TEST_CASE("measurement efficiency") {
    ReadoutChainRecord r = motherboard_records()[3];
    const double eta = eta_from_separation(r, 81.0);
    CHECK(eta == doctest::Approx(0.206).epsilon(0.01));
    r.I_over_sigma = 2.0 * *r.I_over_sigma;
    CHECK(eta_from_separation(r, 81.0) == doctest::Approx(4.0 * eta));
    // sin(theta/2) = 1 and 2 n_m kappa T_m = (I/sigma)^2 gives unit efficiency.
    r.I_over_sigma = std::sqrt(2.0 * r.n_m * kTwoPi * r.kappa * r.T_m);
    CHECK(eta_from_separation(r, 180.0) == doctest::Approx(1.0));
    r.I_over_sigma.reset();
    CHECK_THROWS_AS(eta_from_separation(r, 81.0), DomainError);
}

TEST_CASE("motherboard readout pipeline") {
    const auto t = backaction_table(motherboard_records());
    REQUIRE(t.size() == 4);
    const double reference[] = {98, 98, 6.4, 58};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(t[k].T_phi - reference[k]) <= 0.5);
    for (const auto& row : t) {
        CHECK(row.n_th == t[0].n_th);
        CHECK(row.n_ba == doctest::Approx(row.n_bar - row.n_th));
        CHECK(row.n_ba >= -1e-15);
    }
    CHECK(std::abs(t[0].n_th - 0.003) <= 0.001);
    CHECK(std::abs(t[3].n_ba - 0.002) <= 0.001);
    // Row c recomputes to about 0.05, not the tabulated 0.04.
    CHECK(t[2].n_ba == doctest::Approx(0.0505).epsilon(0.01));
}
