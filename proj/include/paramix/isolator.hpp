#pragma once

#include <vector>

#include "paramix/mixer.hpp"
#include "paramix/network.hpp"

namespace paramix {

enum class PumpPort { P1, P2 };

struct DelaySpec {
    double length_um = 11.283;
    double eps_eff = 7.418;
};

struct JisConfig {
    JpcParams jpc1;
    JpcParams jpc2;
    double alpha = 0.5;          // |alpha|, b-mode through coupling
    DelaySpec delay;
    PumpPort pump_port = PumpPort::P1;
    double f_p = 2.727;          // GHz
    double hybrid_imbalance = 0.0;  // rad, composed model only

    double beta() const;
};

// Stage pump phases (0, pi/2) for P1 and (pi/2, 0) for P2.
void set_pump_port(JisConfig& c, PumpPort port);
JisConfig default_config(double rho = kSqrt2 - 1.0);
// The fitted device: |alpha| = 0.51.
JisConfig device_preset(double rho = kSqrt2 - 1.0);
void validate(const JisConfig& c);

struct JisPhases {
    double phi_p;   // phi_p1 - phi_p2
    int parity;     // (n_g1 + n_g2) mod 2
    double phi;     // phi_p + parity*pi
    double phi_s;   // phi_p1 + phi_p2 + parity*pi
};
JisPhases phases(const JisConfig& c);

struct TwoPort {
    double f = 0.0;  // GHz
    cplx S11, S12, S21, S22;
};

// Four ports labelled 1..4; 3 and 4 are the cold terminations.
ScatteringMatrix closed_form_4port(double t, double alpha, double beta, double phi, double phi_s);

TwoPort on_resonance_2port(double t, double phi);

std::vector<TwoPort> effective_2port_sweep(const JisConfig& c, const std::vector<double>& f_grid);
TwoPort effective_2port_point(const JisConfig& c, double f);

struct StageResponse {
    cplx r_a, r_b, t;
    double phase;  // generalized stage pump phase
};

// Hybrid + two mixers + b-mode line + coupler, reduced with connect().
ScatteringMatrix composed_4port(const StageResponse& s1, const StageResponse& s2, double alpha, double beta,
                                double hybrid_imbalance = 0.0, double b_line_phase = 0.0);
// Convenience: t = t_on_resonance(rho) with phi, phi_s given directly.
ScatteringMatrix composed_4port(double t, double alpha, double beta, double phi, double phi_s);
ScatteringMatrix composed_4port(const JisConfig& c, double f);

double added_noise(double forward_power_transmission);

}  // namespace paramix
