#pragma once

#include "paramix/constants.hpp"

namespace paramix {

struct JpcParams {
    double f_a = 6.84;        // GHz
    double f_b = 9.567;       // GHz
    double gamma_a = 40.0;    // MHz
    double gamma_b = 100.0;   // MHz
    double rho = 0.0;
    double pump_phase = 0.0;  // rad
    double phi_ext = 0.0;     // reduced flux, rad
};

struct JrmParams {
    double I0 = 2.82;          // uA
    double f_max = 7.0232;     // GHz
    double Z_res = 51.1;       // Ohm
    double LJ0_over_L = 3.1;
    double LJ0_over_Ls = 5.0;
};

// Conversion and reflection amplitudes of one stiff-pumped mixer at one frequency.
struct JpcResponse {
    cplx t;
    cplx r_a;
    cplx r_b;
};

inline constexpr double kPrimaryLobe = 1.4 * kTwoPi;

void validate(const JpcParams& p);

double t_on_resonance(double rho);
double r_on_resonance(double rho);

cplx chi_inv(double f1, double f_res, double gamma_MHz);

// Both susceptibilities use the detuning from f_a.
cplx t_of_frequency(double f1, const JpcParams& p);
cplx r_a_of_frequency(double f1, const JpcParams& p);
cplx r_b_of_frequency(double f1, const JpcParams& p);
JpcResponse response(double f1, const JpcParams& p);

int n_g(double phi_ext);
double generalized_pump_phase(double pump_phase, double phi_ext);
int g3_sign(double phi_ext);
double g3_magnitude(double phi_ext, double pa, double pb, double pc, double f_a, double f_b, double f_c,
                    double EJ_eff_over_h);

struct FluxModel {
    double L_J0;    // pH
    double L_s;     // pH
    double L_geo;   // pH
};
FluxModel flux_model(const JrmParams& jrm);
double flux_tuning_curve(double phi_ext, const JrmParams& jrm);

}  // namespace paramix
