#pragma once

#include <utility>
#include <vector>

#include "paramix/isolator.hpp"
#include "paramix/network.hpp"

namespace paramix {

enum class Parity { even, odd };

struct GyratorSpec {
    Parity parity = Parity::even;
    PumpPort pump_port = PumpPort::P1;
};

struct ChainSpec {
    std::vector<GyratorSpec> gyrators;
    double calibration_phase = 0.0;  // bottom-arm constant, rad
};

// Two mixers joined through their b modes by a line of amplitude alpha.
// At full conversion (t = 1) forward is -e^{i phi}, backward -e^{-i phi}.
ScatteringMatrix gyrator_2port(const GyratorSpec& spec, double t = 1.0, double alpha = 1.0);

// A line of k whole wavelengths: transmission exactly 1.
ScatteringMatrix whole_wavelength_line(int k);
double whole_wavelength_length_um(int k, double eps_eff, double freq_GHz);

// Upper-arm input to the dark output of the two-hybrid interferometer.
cplx chain_transmission(const ChainSpec& chain, double t = 1.0, double alpha = 1.0);

// Bottom-arm phase that nulls `reference`. Unique modulo 2 pi.
double calibrate(const ChainSpec& reference, double t = 1.0, double alpha = 1.0);

// All-even chain with the same length and pump ports.
ChainSpec reference_chain(const ChainSpec& chain);
// Copy of `chain` calibrated against its reference.
ChainSpec calibrated(ChainSpec chain);

ChainSpec make_chain(const std::vector<Parity>& parities, PumpPort port = PumpPort::P1);
// Bit k of `bits` is the parity of gyrator k.
std::vector<Parity> parity_vector(unsigned bits, int n);
Parity total_parity(const std::vector<Parity>& v);

// |T| < 0.5 -> even, otherwise odd; any value in [0.3, 0.7] is ambiguous.
std::vector<Parity> infer_parity(const std::vector<double>& observed);

// (0.1 Phi0 / A, Phi0 / A) in tesla for a loop area in um^2.
std::pair<double, double> field_range(double loop_area_um2);

}  // namespace paramix
