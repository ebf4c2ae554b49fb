#pragma once

#include <optional>
#include <string>
#include <vector>

#include "paramix/isolator.hpp"

namespace paramix {

// 10 log10 |s|^2; -inf for s = 0.
double to_power_dB(cplx s);

struct SweepResult {
    std::vector<double> f_GHz;
    std::vector<TwoPort> s;
    JisConfig config;
};

// Grid must be strictly increasing.
SweepResult run_sweep(const JisConfig& c, const std::vector<double>& f_grid);
std::vector<double> linear_grid(double lo, double hi, int points);
// 2001 points over +-150 MHz around f_a.
std::vector<double> default_grid(const JisConfig& c);

enum class Trace { S21, S12 };
// The direction the configured pump isolates.
Trace isolated_trace(const JisConfig& c);
std::vector<double> power(const SweepResult& r, Trace which);

struct Bandwidth {
    double f_dip;  // GHz
    double gamma;  // MHz, full width 3 dB above the minimum
    double L;      // minimum |S|^2
};
Bandwidth bandwidth_3dB(const std::vector<double>& f_GHz, const std::vector<double>& pwr);
Bandwidth bandwidth_3dB(const SweepResult& r, Trace which);

double gamma0(double gamma_a, double gamma_b);

struct ScanPoint {
    double rho = 0.0;
    bool ok = false;
    std::string error;  // bandwidth failure when !ok
    Bandwidth bw{};
    double sqrt_L = 0.0;
    double gamma_ref = 0.0;  // gamma0 * sqrt(L)
};
// Non-strict scans record per-point bandwidth failures instead of throwing.
std::vector<ScanPoint> bandwidth_attenuation_scan(const JisConfig& tmpl, const std::vector<double>& rho_list,
                                                  bool strict = true);

// On-resonance |S21|^2, |S12|^2 of the effective model at (rho, |alpha|).
struct PowerPair {
    double s21_sq;
    double s12_sq;
};
PowerPair on_resonance_powers(const JisConfig& tmpl, double rho, double alpha);

enum class FitBranch { automatic, below_match, above_match };

struct FitSolution {
    double rho;
    double alpha;
    double residual;
    int branch;  // +1 below the matching point, -1 above, 0 undecided
};

struct FitResult {
    double rho = 0.0;
    double alpha = 0.0;
    double residual = 0.0;
    bool alpha_identifiable = true;
    bool ambiguous = false;              // several exact solutions exist
    std::vector<FitSolution> solutions;  // all refined minima, chosen first
};

struct FitOptions {
    double grid_step = 0.005;
    double gradient_tol = 1e-10;
    FitBranch branch = FitBranch::automatic;
};

FitResult fit_rho_alpha(double meas_s21_sq, double meas_s12_sq, const JisConfig& tmpl, const FitOptions& opt = {});

struct ReadoutChainRecord {
    std::string label;
    double T1 = 0.0;     // us
    double T2E = 0.0;    // us
    double kappa = 0.0;  // MHz, cyclic
    double chi = 0.0;    // MHz, cyclic
    double n_m = 0.0;
    double T_m = 0.0;    // us
    std::optional<double> I_over_sigma;
};

struct BackactionReport {
    std::string label;
    double T_phi = 0.0;
    double n_bar = 0.0;
    double n_th = 0.0;
    double n_ba = 0.0;
};

double theta_from_chi_kappa(double chi, double kappa);  // degrees
double eta_from_separation(const ReadoutChainRecord& r, double theta_deg);
double t_phi(double T1, double T2E);
double nbar_from_dephasing(double T_phi_us, double kappa, double chi);
double dephasing_rate(double n_bar, double kappa, double chi);  // 1/s
double isolation_estimate_dB(double n_ba_off, double n_ba_on);

// n_th comes from the record at `baseline` and is held fixed for every row.
std::vector<BackactionReport> backaction_table(const std::vector<ReadoutChainRecord>& records,
                                               std::size_t baseline = 0);

// The four motherboard configurations a-d.
std::vector<ReadoutChainRecord> motherboard_records();

}  // namespace paramix
