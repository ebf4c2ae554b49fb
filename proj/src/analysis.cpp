#include "paramix/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "paramix/error.hpp"
#include "paramix/kernels.hpp"

namespace paramix {

double to_power_dB(cplx s) {
    const double p = std::norm(s);
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p);
}

SweepResult run_sweep(const JisConfig& c, const std::vector<double>& f_grid) {
    for (std::size_t k = 1; k < f_grid.size(); ++k)
        if (!(f_grid[k] > f_grid[k - 1])) throw DomainError("frequency grid must be strictly increasing");
    return {f_grid, effective_2port_sweep(c, f_grid), c};
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw DomainError("grid needs at least two points and hi > lo");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double step = (hi - lo) / (points - 1);
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = lo + step * k;
    g.back() = hi;
    return g;
}

std::vector<double> default_grid(const JisConfig& c) { return linear_grid(c.jpc1.f_a - 0.15, c.jpc1.f_a + 0.15, 2001); }

Trace isolated_trace(const JisConfig& c) { return std::sin(phases(c).phi) < 0.0 ? Trace::S12 : Trace::S21; }

std::vector<double> power(const SweepResult& r, Trace which) {
    std::vector<double> p(r.s.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(which == Trace::S21 ? r.s[k].S21 : r.s[k].S12);
    return p;
}

Bandwidth bandwidth_3dB(const std::vector<double>& f, const std::vector<double>& p) {
    if (f.size() != p.size() || f.size() < 3) throw DomainError("bandwidth needs matching grids of >= 3 points");
    const auto lo_it = std::min_element(p.begin(), p.end());
    const auto hi_it = std::max_element(p.begin(), p.end());
    const std::size_t k = static_cast<std::size_t>(lo_it - p.begin());
    if (k == 0 || k + 1 == p.size() || *hi_it - *lo_it <= 0.0) throw NumericalError("no dip: minimum at grid edge");
    const double L = p[k];
    if (!(L > 0.0)) throw NumericalError("dip reaches zero; 3 dB width undefined");
    const double level = 2.0 * L;

    std::size_t i = k;
    while (i > 0 && p[i] < level) --i;
    if (p[i] < level) throw NumericalError("3 dB points not bracketed");
    const double f_lo = f[i] + (level - p[i]) * (f[i + 1] - f[i]) / (p[i + 1] - p[i]);

    std::size_t j = k;
    while (j + 1 < p.size() && p[j] < level) ++j;
    if (p[j] < level) throw NumericalError("3 dB points not bracketed");
    const double f_hi = f[j - 1] + (level - p[j - 1]) * (f[j] - f[j - 1]) / (p[j] - p[j - 1]);

    return {f[k], (f_hi - f_lo) * 1e3, L};
}

Bandwidth bandwidth_3dB(const SweepResult& r, Trace which) { return bandwidth_3dB(r.f_GHz, power(r, which)); }

double gamma0(double gamma_a, double gamma_b) {
    if (!(gamma_a > 0.0 && gamma_b > 0.0)) throw DomainError("linewidths must be > 0");
    return 2.0 * gamma_a * gamma_b / (gamma_a + gamma_b);
}

namespace {

JisConfig with_rho(JisConfig c, double rho) {
    c.jpc1.rho = rho;
    c.jpc2.rho = rho;
    return c;
}

TwoPort on_resonance_point(const JisConfig& c, double rho, double alpha) {
    const JpcParams& p = c.jpc1;
    const double f = p.f_a;
    const JisPhases ph = phases(c);
    const kernels::JisArgs args{{p.f_a, 2.0 / (p.gamma_a * 1e-3), 2.0 / (p.gamma_b * 1e-3), rho},
                                std::sin(ph.phi),
                                std::cos(ph.phi)};
    const cplx al = std::polar(alpha, delay_phase(c.delay.length_um, c.delay.eps_eff, f + c.f_p));
    const double are = al.real();
    const double aim = al.imag();
    double o[6];
    const long bad = kernels::jis_scalar(args, 1, {&f, &are, &aim}, {o, o + 1, o + 2, o + 3, o + 4, o + 5});
    if (bad >= 0) throw NumericalError("internal resonance singularity at the fit point");
    TwoPort t;
    t.f = f;
    t.S21 = {o[0], o[1]};
    t.S12 = {o[2], o[3]};
    t.S11 = t.S22 = {o[4], o[5]};
    return t;
}

int branch_of(const JisConfig& c, const TwoPort& s) {
    const cplx iso = isolated_trace(c) == Trace::S12 ? s.S12 : s.S21;
    const double v = (-kI * iso).real();
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

}  // namespace

PowerPair on_resonance_powers(const JisConfig& tmpl, double rho, double alpha) {
    const TwoPort s = on_resonance_point(tmpl, rho, alpha);
    return {std::norm(s.S21), std::norm(s.S12)};
}

std::vector<ScanPoint> bandwidth_attenuation_scan(const JisConfig& tmpl, const std::vector<double>& rho_list,
                                                  bool strict) {
    const double g0 = gamma0(tmpl.jpc1.gamma_a, tmpl.jpc1.gamma_b);
    const std::vector<double> grid = default_grid(tmpl);
    const Trace which = isolated_trace(tmpl);
    std::vector<ScanPoint> out;
    for (double rho : rho_list) {
        ScanPoint sp;
        sp.rho = rho;
        const SweepResult r = run_sweep(with_rho(tmpl, rho), grid);
        try {
            sp.bw = bandwidth_3dB(r, which);
            sp.ok = true;
            sp.sqrt_L = std::sqrt(sp.bw.L);
            sp.gamma_ref = g0 * sp.sqrt_L;
        } catch (const NumericalError& e) {
            if (strict) throw;
            sp.error = e.what();
            const std::vector<double> p = power(r, which);
            sp.bw.L = *std::min_element(p.begin(), p.end());
            sp.sqrt_L = std::sqrt(sp.bw.L);
            sp.gamma_ref = g0 * sp.sqrt_L;
        }
        out.push_back(sp);
    }
    return out;
}

FitResult fit_rho_alpha(double m21, double m12, const JisConfig& tmpl, const FitOptions& opt) {
    if (!(m21 > 0.0 && m21 <= 1.0) || !(m12 > 0.0 && m12 <= 1.0))
        throw DomainError("measured powers must lie in (0, 1]");
    if (!(opt.grid_step > 0.0 && opt.grid_step <= 0.5)) throw DomainError("fit grid step must lie in (0, 0.5]");
    validate(tmpl);

    auto residuals = [&](double rho, double alpha) {
        const PowerPair p = on_resonance_powers(tmpl, rho, alpha);
        return Eigen::Vector2d(p.s21_sq - m21, p.s12_sq - m12);
    };
    auto cost = [&](double rho, double alpha) { return residuals(rho, alpha).squaredNorm(); };

    // Coarse grid.
    const int n = static_cast<int>(std::lround(1.0 / opt.grid_step)) + 1;
    auto axis = [&](int k) { return std::min(1.0, k * opt.grid_step); };
    std::vector<double> grid(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) grid[static_cast<std::size_t>(i) * n + j] = cost(axis(i), axis(j));
    const auto [gmin, gmax] = std::minmax_element(grid.begin(), grid.end());
    if (*gmax - *gmin < 1e-15) throw NumericalError("non-identifiable: residual surface is flat");

    struct Seed {
        double c;
        int i, j;
    };
    std::vector<Seed> seeds;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double c = grid[static_cast<std::size_t>(i) * n + j];
            bool local = true;
            for (int di = -1; di <= 1 && local; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di, b = j + dj;
                    if ((di || dj) && a >= 0 && a < n && b >= 0 && b < n &&
                        grid[static_cast<std::size_t>(a) * n + b] < c) {
                        local = false;
                        break;
                    }
                }
            if (local) seeds.push_back({c, i, j});
        }
    }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.c != b.c) return a.c < b.c;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    if (seeds.size() > 16) seeds.resize(16);

    // Levenberg-Marquardt refinement inside the unit box.
    auto refine = [&](double rho, double alpha) {
        Eigen::Vector2d x(rho, alpha);
        double lambda = 1e-3;
        Eigen::Vector2d r = residuals(x[0], x[1]);
        double c = r.squaredNorm();
        for (int it = 0; it < 500; ++it) {
            Eigen::Matrix2d J;
            for (int k = 0; k < 2; ++k) {
                const double h = 1e-7;
                Eigen::Vector2d xp = x, xm = x;
                xp[k] = std::min(1.0, x[k] + h);
                xm[k] = std::max(0.0, x[k] - h);
                J.col(k) = (residuals(xp[0], xp[1]) - residuals(xm[0], xm[1])) / (xp[k] - xm[k]);
            }
            const Eigen::Vector2d g = J.transpose() * r;
            // Projected gradient: components pushing out of the box do not count.
            Eigen::Vector2d pg = g;
            for (int k = 0; k < 2; ++k)
                if ((x[k] <= 0.0 && g[k] > 0.0) || (x[k] >= 1.0 && g[k] < 0.0)) pg[k] = 0.0;
            if (2.0 * pg.norm() < opt.gradient_tol || c < 1e-30) break;
            Eigen::Matrix2d A = J.transpose() * J;
            A.diagonal() += lambda * A.diagonal().cwiseMax(1e-12);
            const Eigen::Vector2d step = A.ldlt().solve(-g);
            Eigen::Vector2d xn = (x + step).cwiseMax(0.0).cwiseMin(1.0);
            const Eigen::Vector2d rn = residuals(xn[0], xn[1]);
            const double cn = rn.squaredNorm();
            if (cn < c) {
                const bool tiny = (xn - x).norm() < 1e-15;
                x = xn;
                r = rn;
                c = cn;
                lambda = std::max(lambda * 0.1, 1e-12);
                if (tiny) break;
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) break;
            }
        }
        return FitSolution{x[0], x[1], c, branch_of(tmpl, on_resonance_point(tmpl, x[0], x[1]))};
    };

    std::vector<FitSolution> sols;
    for (const Seed& s : seeds) {
        const FitSolution f = refine(axis(s.i), axis(s.j));
        bool dup = false;
        for (auto& e : sols)
            if (std::abs(e.rho - f.rho) < 1e-7 && std::abs(e.alpha - f.alpha) < 1e-7) {
                if (f.residual < e.residual) e = f;
                dup = true;
            }
        if (!dup) sols.push_back(f);
    }
    std::sort(sols.begin(), sols.end(), [](const FitSolution& a, const FitSolution& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.alpha < b.alpha;
    });

    // Solutions whose residuals agree to round-off are ties; break by smallest rho, then alpha.
    const double tie = sols.front().residual + 1e-18;
    std::vector<FitSolution> best;
    for (const auto& s : sols)
        if (s.residual <= tie) best.push_back(s);
    std::sort(best.begin(), best.end(), [](const FitSolution& a, const FitSolution& b) {
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.alpha < b.alpha;
    });
    const FitSolution* pick = &best.front();
    if (opt.branch != FitBranch::automatic) {
        const int want = opt.branch == FitBranch::below_match ? 1 : -1;
        pick = nullptr;
        for (const auto& s : best)
            if (s.branch == want) {
                pick = &s;
                break;
            }
        if (!pick) throw NumericalError("no exact fit solution on the requested branch");
    }

    FitResult res;
    res.rho = pick->rho;
    res.alpha = pick->alpha;
    res.residual = pick->residual;
    res.ambiguous = best.size() > 1;
    res.alpha_identifiable = pick->rho > 1e-6;
    res.solutions.push_back(*pick);
    for (const auto& s : sols)
        if (s.rho != pick->rho || s.alpha != pick->alpha) res.solutions.push_back(s);
    return res;
}

double theta_from_chi_kappa(double chi, double kappa) {
    if (!(kappa > 0.0) || !(chi >= 0.0)) throw DomainError("kappa must be > 0 and chi >= 0");
    return 2.0 * std::atan(chi / kappa) * 180.0 / kPi;
}

double eta_from_separation(const ReadoutChainRecord& r, double theta_deg) {
    if (!r.I_over_sigma) throw DomainError("record '" + r.label + "' has no I/sigma separation");
    if (!(r.n_m > 0.0 && r.kappa > 0.0 && r.T_m > 0.0 && theta_deg > 0.0))
        throw DomainError("readout parameters must be positive");
    const double s = std::sin(theta_deg * kPi / 360.0);
    const double kappa = kTwoPi * r.kappa * 1e6;
    const double sep = *r.I_over_sigma;
    return sep * sep / (2.0 * r.n_m * kappa * r.T_m * 1e-6 * s * s);
}

double t_phi(double T1, double T2E) {
    if (!(T1 > 0.0) || !(T2E > 0.0)) throw DomainError("coherence times must be > 0");
    if (T2E >= 2.0 * T1) throw NumericalError("no measurable dephasing: T2E >= 2 T1");
    return 1.0 / (1.0 / T2E - 1.0 / (2.0 * T1));
}

double dephasing_rate(double n_bar, double kappa, double chi) {
    const double k = kTwoPi * kappa * 1e6;
    const double x = kTwoPi * chi * 1e6;
    return n_bar * k * x * x / (k * k + x * x);
}

double nbar_from_dephasing(double T_phi_us, double kappa, double chi) {
    if (!(T_phi_us > 0.0) || !(kappa > 0.0) || !(chi > 0.0)) throw DomainError("T_phi, kappa, chi must be > 0");
    if (std::isinf(T_phi_us)) return 0.0;
    const double gamma = 1.0 / (T_phi_us * 1e-6);
    const double k = kTwoPi * kappa * 1e6;
    const double x = kTwoPi * chi * 1e6;
    return gamma * (k * k + x * x) / (k * x * x);
}

double isolation_estimate_dB(double n_ba_off, double n_ba_on) {
    if (!(n_ba_off > 0.0) || !(n_ba_on > 0.0)) throw DomainError("backaction photon numbers must be > 0");
    return 10.0 * std::log10(n_ba_off / n_ba_on);
}

std::vector<BackactionReport> backaction_table(const std::vector<ReadoutChainRecord>& records, std::size_t baseline) {
    if (records.empty()) throw DomainError("no readout records");
    if (baseline >= records.size()) throw DomainError("baseline index out of range");
    std::vector<BackactionReport> out;
    for (const auto& r : records) {
        BackactionReport b;
        b.label = r.label;
        b.T_phi = t_phi(r.T1, r.T2E);
        b.n_bar = nbar_from_dephasing(b.T_phi, r.kappa, r.chi);
        out.push_back(b);
    }
    const double n_th = out[baseline].n_bar;
    for (auto& b : out) {
        b.n_th = n_th;
        b.n_ba = b.n_bar - n_th;
    }
    return out;
}

std::vector<ReadoutChainRecord> motherboard_records() {
    auto rec = [](const char* label, double T1, double T2E) {
        ReadoutChainRecord r;
        r.label = label;
        r.T1 = T1;
        r.T2E = T2E;
        r.kappa = 1.1;
        r.chi = 0.94;
        r.n_m = 2.0;
        r.T_m = 1.0;
        return r;
    };
    std::vector<ReadoutChainRecord> v{rec("a", 60, 54), rec("b", 63, 55), rec("c", 55, 6), rec("d", 65, 40)};
    v[3].I_over_sigma = 1.55;
    return v;
}

}  // namespace paramix
