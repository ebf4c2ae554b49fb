#include "paramix/acceptance.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdarg>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "paramix/analysis.hpp"
#include "paramix/commands.hpp"
#include "paramix/error.hpp"
#include "paramix/io.hpp"
#include "paramix/isolator.hpp"
#include "paramix/parity.hpp"

namespace paramix::acceptance {

namespace {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Result c1() {
    Result r{1, false, "closed-form anchors at the 50:50 point", ""};
    const double h = 1.0 / kSqrt2;
    const ScatteringMatrix m = closed_form_4port(h, h, h, -kPi / 2.0, kPi / 2.0);
    const double e21 = std::abs(std::abs(m.s(1, 0)) - 2.0 * kSqrt2 / 3.0);
    const double e12 = std::abs(m.s(0, 1));
    const double e11 = std::max(std::abs(m.s(0, 0)), std::abs(m.s(1, 1)));
    const int reps = 1000;
    const auto t0 = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int k = 0; k < reps; ++k) sink += closed_form_4port(h, h, h, -kPi / 2.0, kPi / 2.0).s(1, 0).imag();
    const double per = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
    const bool fast = per < 1e-3 && sink > 0.0;
    r.pass = e21 < 1e-12 && e12 < 1e-12 && e11 < 1e-12 && fast;
    r.detail = fmt("||S21|-2sqrt2/3|=%.1e |S12|=%.1e max|S11|,|S22|=%.1e (tol 1e-12); runtime %s 1 ms", e21, e12,
                   e11, fast ? "<" : ">=");
    return r;
}

Result c2() {
    Result r{2, false, "pump-off transparency", ""};
    const ScatteringMatrix m = closed_form_4port(0.0, 1.0 / kSqrt2, 1.0 / kSqrt2, 0.3, -1.1);
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
    want(1, 0) = want(0, 1) = kI;
    want(2, 2) = want(3, 3) = -1.0;
    r.pass = m.s == want;
    r.detail = r.pass ? "exact match: S21=S12=i, S33=S44=-1, others 0" : "matrix differs from the transparency matrix";
    return r;
}

Result c3() {
    Result r{3, false, "unitarity of the closed form", ""};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(0.0, 1.0), up(-kPi, kPi);
    const double h = 1.0 / kSqrt2;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double t = ut(rng), phi = up(rng), phis = up(rng);
        worst = std::max(worst, unitarity_deviation(closed_form_4port(t, h, h, phi, phis).s));
    }
    r.pass = worst < 1e-9;
    r.detail = fmt("1000 random (t, phi, phi_s): max |S^H S - I| = %.1e (tol 1e-9)", worst);
    return r;
}

Result c4() {
    Result r{4, false, "composed network vs closed form", ""};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ut(0.0, 1.0), ua(0.02, 0.98), up(-kPi, kPi);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double t = ut(rng), a = ua(rng), phi = up(rng), phis = up(rng);
        const double b = std::sqrt(1.0 - a * a);
        worst = std::max(worst, max_abs_diff(composed_4port(t, a, b, phi, phis).s, closed_form_4port(t, a, b, phi, phis).s));
    }
    double worst2 = 0.0;
    const double h = 1.0 / kSqrt2;
    for (int k = 0; k < 1000; ++k) {
        const double t = ut(rng), phi = up(rng);
        const ScatteringMatrix m = closed_form_4port(t, h, h, phi, up(rng));
        const TwoPort p = on_resonance_2port(t, phi);
        worst2 = std::max({worst2, std::abs(p.S21 - m.s(1, 0)), std::abs(p.S12 - m.s(0, 1)),
                           std::abs(p.S11 - m.s(0, 0)), std::abs(p.S22 - m.s(1, 1))});
    }
    r.pass = worst < 1e-9 && worst2 < 1e-12;
    r.detail = fmt("composed vs closed max %.1e (tol 1e-9, 1000 sets); 2-port vs closed max %.1e (tol 1e-12)", worst, worst2);
    return r;
}

JisConfig random_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ur(0.05, 1.0), ua(0.05, 0.95), uf(0.05, 1.4), u01(0.0, 1.0);
    JisConfig c = default_config(ur(rng));
    c.alpha = ua(rng);
    c.jpc1.phi_ext = (u01(rng) < 0.5 ? -1.0 : 1.0) * uf(rng) * kTwoPi;
    c.jpc2.phi_ext = (u01(rng) < 0.5 ? -1.0 : 1.0) * uf(rng) * kTwoPi;
    set_pump_port(c, u01(rng) < 0.5 ? PumpPort::P1 : PumpPort::P2);
    return c;
}

Result c5() {
    Result r{5, false, "directionality and parity flips", ""};
    std::mt19937_64 rng(5);
    double swap_err = 0.0, double_err = 0.0;
    for (int k = 0; k < 100; ++k) {
        const JisConfig c = random_config(rng);
        JisConfig one = c;
        one.jpc1.phi_ext = -c.jpc1.phi_ext;
        JisConfig both = one;
        both.jpc2.phi_ext = -c.jpc2.phi_ext;
        const double t = t_on_resonance(c.jpc1.rho);
        const JisPhases p = phases(c);
        // phi -> phi + pi in the closed form.
        const auto a = closed_form_4port(t, c.alpha, c.beta(), p.phi, p.phi_s).s;
        const auto b = closed_form_4port(t, c.alpha, c.beta(), p.phi + kPi, p.phi_s).s;
        swap_err = std::max({swap_err, std::abs(std::abs(a(1, 0)) - std::abs(b(0, 1))),
                             std::abs(std::abs(a(0, 1)) - std::abs(b(1, 0)))});
        // One flux flipped: composed and effective models.
        const auto ca = composed_4port(c, c.jpc1.f_a).s;
        const auto cb = composed_4port(one, c.jpc1.f_a).s;
        const auto cc = composed_4port(both, c.jpc1.f_a).s;
        swap_err = std::max({swap_err, std::abs(std::abs(ca(1, 0)) - std::abs(cb(0, 1))),
                             std::abs(std::abs(ca(0, 1)) - std::abs(cb(1, 0)))});
        double_err = std::max(double_err, max_abs_diff(ca, cc));
        const std::vector<double> f{c.jpc1.f_a - 0.01, c.jpc1.f_a, c.jpc1.f_a + 0.004};
        const auto ea = effective_2port_sweep(c, f);
        const auto eb = effective_2port_sweep(one, f);
        const auto ec = effective_2port_sweep(both, f);
        for (std::size_t j = 0; j < f.size(); ++j) {
            swap_err = std::max({swap_err, std::abs(std::abs(ea[j].S21) - std::abs(eb[j].S12)),
                                 std::abs(std::abs(ea[j].S12) - std::abs(eb[j].S21))});
            double_err = std::max({double_err, std::abs(ea[j].S21 - ec[j].S21), std::abs(ea[j].S12 - ec[j].S12),
                                   std::abs(ea[j].S11 - ec[j].S11), std::abs(ea[j].S22 - ec[j].S22)});
        }
        const JisPhases pb = phases(both);
        double_err = std::max(double_err, max_abs_diff(a, closed_form_4port(t, c.alpha, c.beta(), pb.phi, pb.phi_s).s));
    }
    r.pass = swap_err < 1e-12 && double_err < 1e-12;
    r.detail = fmt("100 configs, three models: swap error %.1e, double-flip change %.1e (tol 1e-12)", swap_err, double_err);
    return r;
}

Result c6() {
    Result r{6, false, "added noise", ""};
    const double a = added_noise(std::pow(10.0, -0.2));
    const double b = added_noise(8.0 / 9.0);
    r.pass = std::abs(a - 0.2924) <= 0.0005 && b == 0.0625;
    r.detail = fmt("n_add(10^-0.2)=%.6f (0.2924+-0.0005), n_add(8/9)=%.17g (exact 0.0625)", a, b);
    return r;
}

Result c7() {
    Result r{7, false, "bandwidth-attenuation law", ""};
    const double g0 = gamma0(40.0, 100.0);
    const bool g0_ok = std::abs(g0 - 57.143) <= 0.001;
    std::vector<double> rhos{0.005, 0.01, 0.02, 0.05};
    for (int k = 1; k <= 12; ++k) rhos.push_back(0.05 * k + 0.05);
    const auto scan = bandwidth_attenuation_scan(device_preset(), rhos, false);
    int checked = 0, within = 0;
    double worst = 0.0, worst_L = 0.0;
    std::string unmeasured;
    for (const auto& s : scan) {
        if (!s.ok) {
            unmeasured += fmt(" %.3g", s.rho);
            continue;
        }
        if (s.bw.L < 0.01) continue;
        ++checked;
        const double dev = std::abs(s.bw.gamma / s.gamma_ref - 1.0);
        within += dev <= 0.15;
        if (dev > worst) {
            worst = dev;
            worst_L = s.bw.L;
        }
    }
    // gamma -> gamma0 as rho -> 0: the smallest-rho point must be measurable.
    const ScanPoint& low = scan.front();
    const bool off_ok = low.ok && std::abs(low.bw.gamma / g0 - 1.0) <= 0.05;
    r.pass = g0_ok && checked > 0 && within == checked && off_ok;
    r.detail = fmt("gamma0=%.6f MHz; %d/%d points with L>=0.01 within 15%% of gamma0*sqrt(L) (worst %.0f%% at L=%.3g); ",
                   g0, within, checked, worst * 100.0, worst_L);
    if (off_ok) {
        r.detail += fmt("rho=%.3g gives gamma/gamma0=%.3f", low.rho, low.bw.gamma / g0);
    } else {
        r.detail += fmt("rho->0 limit not measurable (rho=%.3g: L=%.4f, %s)", low.rho, low.bw.L,
                        low.ok ? "width off by >5%" : low.error.c_str());
    }
    if (!unmeasured.empty()) r.detail += "; no 3 dB bracket at rho =" + unmeasured;
    return r;
}

Result c8() {
    Result r{8, false, "fit round trip", ""};
    const JisConfig tmpl = device_preset();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    int primary = 0, in_set = 0, ambiguous = 0;
    for (int k = 0; k < 100; ++k) {
        const double rho = u(rng), alpha = u(rng);
        const PowerPair m = on_resonance_powers(tmpl, rho, alpha);
        const FitResult f = fit_rho_alpha(m.s21_sq, m.s12_sq, tmpl);
        primary += std::abs(f.rho - rho) <= 1e-5 && std::abs(f.alpha - alpha) <= 1e-5;
        ambiguous += f.ambiguous;
        for (const auto& s : f.solutions)
            if (s.residual <= 1e-18 && std::abs(s.rho - rho) <= 1e-5 && std::abs(s.alpha - alpha) <= 1e-5) {
                ++in_set;
                break;
            }
    }
    const FitResult measured = fit_rho_alpha(std::pow(10.0, -0.2), std::pow(10.0, -2.3), tmpl);
    const bool info = std::abs(measured.alpha - 0.51) <= 0.02;
    r.pass = primary == 100;
    r.detail = fmt("primary fit recovered %d/100 truths within 1e-5; truth among exact solutions %d/100; "
                   "%d/100 pairs have two exact solutions (tie broken by smallest rho). "
                   "Informational: 2 dB/23 dB pair fits rho=%.4f |alpha|=%.4f (%s 0.02 of 0.51)",
                   primary, in_set, ambiguous, measured.rho, measured.alpha, info ? "within" : "not within");
    if (measured.solutions.size() > 1) {
        for (const auto& s : measured.solutions)
            if (s.residual <= 1e-18 && (s.rho != measured.rho || s.alpha != measured.alpha))
                r.detail += fmt("; other exact solution rho=%.4f |alpha|=%.4f", s.rho, s.alpha);
    }
    return r;
}

Result c9() {
    Result r{9, false, "readout pipeline (motherboard records)", ""};
    const auto table = backaction_table(motherboard_records());
    const double reference[] = {98.0, 98.0, 6.4, 58.0};
    bool ok = true;
    std::string tp;
    for (std::size_t k = 0; k < 4; ++k) {
        ok = ok && std::abs(table[k].T_phi - reference[k]) <= 0.5;
        tp += fmt("%s%.2f", k ? "/" : "", table[k].T_phi);
    }
    const double n_th = table[0].n_th;
    const double n_ba_d = table[3].n_ba;
    const double iso = isolation_estimate_dB(0.04, 0.002);
    const double theta = theta_from_chi_kappa(0.94, 1.1);
    const double eta = eta_from_separation(motherboard_records()[3], theta);
    ok = ok && std::abs(n_th - 0.003) <= 0.001 && std::abs(n_ba_d - 0.002) <= 0.001 && std::abs(iso - 13.0) <= 0.1 &&
         std::abs(theta - 81.0) <= 0.2 && std::abs(eta - 0.20) <= 0.02;
    r.pass = ok;
    r.detail = fmt("T_phi=%s us; n_th=%.4f; n_ba(d)=%.4f; isolation=%.2f dB; theta=%.2f deg; eta=%.3f; "
                   "documented discrepancy: n_ba(c)=%.4f vs reference 0.04",
                   tp.c_str(), n_th, n_ba_d, iso, theta, eta, table[2].n_ba);
    return r;
}

Result c10() {
    Result r{10, false, "parity chains and field range", ""};
    int predictions = 0, correct = 0, refs = 0;
    double worst = 0.0;
    for (PumpPort port : {PumpPort::P1, PumpPort::P2}) {
        for (int n = 1; n <= 6; ++n) {
            const ChainSpec ref = make_chain(parity_vector(0, n), port);
            const double cal = calibrate(ref);
            for (unsigned bits = 0; bits < (1u << n); ++bits) {
                ChainSpec ch = make_chain(parity_vector(bits, n), port);
                ch.calibration_phase = cal;
                const double mag = std::abs(chain_transmission(ch));
                const double want = total_parity(parity_vector(bits, n)) == Parity::odd ? 1.0 : 0.0;
                const double err = std::abs(mag - want);
                worst = std::max(worst, err);
                if (bits == 0) {
                    refs += err < 1e-12;
                } else {
                    ++predictions;
                    correct += err < 1e-12;
                }
            }
        }
    }
    const auto [lo, hi] = field_range(100.0 * 100.0);
    const bool field_ok = std::abs(lo / 2.07e-8 - 1.0) <= 0.01 && std::abs(hi / 2.07e-7 - 1.0) <= 0.01;
    r.pass = correct == predictions && refs == 12 && field_ok;
    r.detail = fmt("%d/%d predictions match XOR (one calibration per chain length and pump port, 12 references "
                   "nulled); max error %.1e (tol 1e-12); field range (%.4g, %.4g) T",
                   correct, predictions, worst, lo, hi);
    return r;
}

Result c11() {
    Result r{11, false, "sweep property suite", ""};
    const JisConfig c = device_preset();
    const std::vector<double> grid = default_grid(c);
    const double step = grid[1] - grid[0];
    const SweepResult s = run_sweep(c, grid);
    const Bandwidth bw = bandwidth_3dB(s, isolated_trace(c));
    const bool dip_ok = std::abs(bw.f_dip - c.jpc1.f_a) <= step * (1.0 + 1e-9);

    JisConfig c2 = c;
    set_pump_port(c2, PumpPort::P2);
    const SweepResult s2 = run_sweep(c2, grid);
    double swap = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        swap = std::max({swap, std::abs(std::norm(s.s[k].S21) - std::norm(s2.s[k].S12)),
                         std::abs(std::norm(s.s[k].S12) - std::norm(s2.s[k].S21))});

    double worst_power = 0.0;
    std::vector<double> depth;
    for (int k = 1; k <= 50; ++k) {
        JisConfig ck = c;
        ck.jpc1.rho = ck.jpc2.rho = 0.02 * k;
        const SweepResult sk = run_sweep(ck, grid);
        double lo = 1.0;
        for (const auto& p : sk.s) {
            worst_power = std::max({worst_power, std::norm(p.S21), std::norm(p.S12)});
            lo = std::min(lo, std::norm(p.S12));
        }
        depth.push_back(lo);
    }
    const std::size_t match = static_cast<std::size_t>(std::min_element(depth.begin(), depth.end()) - depth.begin());
    bool monotone = true;
    for (std::size_t k = 1; k <= match; ++k) monotone = monotone && depth[k] < depth[k - 1];

    r.pass = dip_ok && swap < 1e-12 && worst_power <= 1.0 + 1e-12 && monotone;
    r.detail = fmt("dip at %.5f GHz vs f_a %.5f (grid step %.2f MHz); P1/P2 swap error %.1e; max |S|^2 %.6f; "
                   "dip depth %s up to matching rho=%.2f",
                   bw.f_dip, c.jpc1.f_a, step * 1e3, swap, worst_power, monotone ? "monotone" : "NOT monotone",
                   0.02 * (match + 1));
    return r;
}

Result c12() {
    Result r{12, false, "determinism", ""};
    const auto t0 = std::chrono::steady_clock::now();
    // Criteria text must not change between runs.
    std::string first, second;
    for (int id = 1; id <= 11; ++id) first += format(run(id)) + "\n";
    for (int id = 1; id <= 11; ++id) second += format(run(id)) + "\n";
    bool same = first == second;

    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / fmt("paramix-determinism-%ld", static_cast<long>(::getpid()));
    const char* configs[] = {
        R"({"schema":"paramix/1","command":"jis-sweep","jis":{"preset":"device"}})",
        R"({"schema":"paramix/1","command":"parity","enumerate":{"max_n":3}})",
        R"({"schema":"paramix/1","command":"jpc-sweep","jpc":{"rho":0.414213562}})",
    };
    int files = 0;
    for (int run_id = 0; run_id < 2; ++run_id) {
        for (const char* text : configs) {
            RunOptions opt;
            opt.out_dir = (base / std::to_string(run_id)).string();
            std::ostringstream log;
            run_command(config::parse(text), opt, log);
        }
    }
    for (const auto& e : fs::directory_iterator(base / "0")) {
        const fs::path other = base / "1" / e.path().filename();
        same = same && fs::exists(other) && io::read_text(e.path().string()) == io::read_text(other.string());
        ++files;
    }
    fs::remove_all(base);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = same && files > 0 && secs < 60.0;
    r.detail = fmt("repeated criteria text and %d output files %s; check finished %s 60 s", files,
                   same ? "byte-identical" : "DIFFER", secs < 60.0 ? "within" : "beyond");
    return r;
}

}  // namespace

Result run(int id) {
    try {
        switch (id) {
            case 1: return c1();
            case 2: return c2();
            case 3: return c3();
            case 4: return c4();
            case 5: return c5();
            case 6: return c6();
            case 7: return c7();
            case 8: return c8();
            case 9: return c9();
            case 10: return c10();
            case 11: return c11();
            case 12: return c12();
            default: throw DomainError(fmt("no acceptance criterion %d", id));
        }
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception& e) {
        return Result{id, false, "error", e.what()};
    }
}

std::vector<Result> run_all(const std::vector<int>& ids) {
    std::vector<Result> out;
    for (int id : ids) out.push_back(run(id));
    return out;
}

std::string format(const Result& r) {
    return fmt("%s  %2d  %s: ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str()) + r.detail;
}

}  // namespace paramix::acceptance
