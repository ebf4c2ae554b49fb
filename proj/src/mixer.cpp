#include "paramix/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paramix/error.hpp"

namespace paramix {

namespace {

void check_rho(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("pump amplitude rho must lie in [0, 1]");
}

void check_lobe(double phi_ext) {
    if (!(std::abs(phi_ext) <= kPrimaryLobe)) throw DomainError("flux outside the primary lobe |phi_ext| <= 1.4*2pi");
}

}  // namespace

void validate(const JpcParams& p) {
    check_rho(p.rho);
    if (!(p.gamma_a > 0.0) || !(p.gamma_b > 0.0)) throw DomainError("linewidths must be > 0");
    if (!(p.f_b > p.f_a)) throw DomainError("f_b must exceed f_a");
    check_lobe(p.phi_ext);
}

double t_on_resonance(double rho) {
    check_rho(rho);
    return 2.0 * rho / (1.0 + rho * rho);
}

double r_on_resonance(double rho) {
    check_rho(rho);
    return (1.0 - rho * rho) / (1.0 + rho * rho);
}

cplx chi_inv(double f1, double f_res, double gamma_MHz) {
    if (!(gamma_MHz > 0.0)) throw DomainError("linewidth must be > 0");
    return {1.0, -2.0 * (f1 - f_res) / (gamma_MHz * 1e-3)};
}

JpcResponse response(double f1, const JpcParams& p) {
    const cplx xa = chi_inv(f1, p.f_a, p.gamma_a);
    const cplx xb = chi_inv(f1, p.f_a, p.gamma_b);
    const double r2 = p.rho * p.rho;
    const cplx d = xa * xb + r2;
    return {2.0 * p.rho / d, (std::conj(xa) * xb - r2) / d, (xa * std::conj(xb) - r2) / d};
}

cplx t_of_frequency(double f1, const JpcParams& p) { return response(f1, p).t; }
cplx r_a_of_frequency(double f1, const JpcParams& p) { return response(f1, p).r_a; }
cplx r_b_of_frequency(double f1, const JpcParams& p) { return response(f1, p).r_b; }

int n_g(double phi_ext) {
    check_lobe(phi_ext);
    return phi_ext > 0.0 ? 1 : 0;
}

double generalized_pump_phase(double pump_phase, double phi_ext) {
    return pump_phase + n_g(phi_ext) * kPi;
}

int g3_sign(double phi_ext) {
    check_lobe(phi_ext);
    if (phi_ext > 0.0) return -1;
    if (phi_ext < 0.0) return 1;
    return 0;
}

double g3_magnitude(double phi_ext, double pa, double pb, double pc, double f_a, double f_b, double f_c,
                    double EJ_eff_over_h) {
    check_lobe(phi_ext);
    if (!(EJ_eff_over_h > 0.0)) throw DomainError("E_J^eff must be > 0");
    for (double p : {pa, pb, pc})
        if (!(p > 0.0 && p <= 1.0)) throw DomainError("participation ratios must lie in (0, 1]");
    return std::abs(std::sin(phi_ext / 4.0)) * std::sqrt(pa * pb * pc * f_a * f_b * f_c / EJ_eff_over_h);
}

FluxModel flux_model(const JrmParams& jrm) {
    if (!(jrm.I0 > 0.0 && jrm.f_max > 0.0 && jrm.Z_res > 0.0 && jrm.LJ0_over_L > 0.0 && jrm.LJ0_over_Ls > 0.0))
        throw DomainError("JRM parameters must be positive");
    FluxModel m{};
    m.L_J0 = kFluxQuantum / (kTwoPi * jrm.I0 * 1e-6) * 1e12;
    m.L_s = m.L_J0 / jrm.LJ0_over_Ls;
    const double ljrm0 = m.L_J0 / (jrm.LJ0_over_L / 2.0 + 1.0);
    // Series inductance of a half-wave resonator seen at its fundamental.
    const double l_res = (kPi / 2.0) * jrm.Z_res / (kTwoPi * jrm.f_max * 1e9) * 1e12;
    m.L_geo = std::max(0.0, l_res - m.L_s - ljrm0);
    return m;
}

double flux_tuning_curve(double phi_ext, const JrmParams& jrm) {
    check_lobe(phi_ext);
    const FluxModel m = flux_model(jrm);
    const double denom = jrm.LJ0_over_L / 2.0 + std::cos(phi_ext / 4.0);
    if (!(denom > 0.0)) throw DomainError("ring inductance diverges at this flux");
    const double total0 = m.L_geo + m.L_s + m.L_J0 / (jrm.LJ0_over_L / 2.0 + 1.0);
    const double total = m.L_geo + m.L_s + m.L_J0 / denom;
    if (phi_ext == 0.0) return jrm.f_max;
    return jrm.f_max * std::sqrt(total0 / total);
}

}  // namespace paramix
