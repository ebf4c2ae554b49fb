#include "paramix/parity.hpp"

#include <cmath>
#include <string>

#include "paramix/error.hpp"

namespace paramix {

namespace {

double gyrator_phase(const GyratorSpec& s) {
    const double phi_p = s.pump_port == PumpPort::P1 ? -kPi / 2.0 : kPi / 2.0;
    return phi_p + (s.parity == Parity::odd ? kPi : 0.0);
}

ScatteringMatrix phase_shifter(double phase) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(1, 0) = s(0, 1) = std::polar(1.0, phase);
    return make_matrix({"1", "2"}, s);
}

}  // namespace

ScatteringMatrix gyrator_2port(const GyratorSpec& spec, double t, double alpha) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    const double phi = gyrator_phase(spec);
    const double r = std::sqrt(1.0 - t * t);
    const double den = 1.0 - r * r * alpha * alpha;
    if (std::abs(den) < 1e-12) throw NumericalError("gyrator internal loop is singular");
    const double common = alpha * t * t / den;
    Eigen::MatrixXcd s(2, 2);
    s(1, 0) = -common * std::polar(1.0, phi);
    s(0, 1) = -common * std::polar(1.0, -phi);
    s(0, 0) = s(1, 1) = r - r * alpha * common;
    return make_matrix({"1", "2"}, s);
}

ScatteringMatrix whole_wavelength_line(int k) {
    if (k < 0) throw DomainError("wavelength count must be >= 0");
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(1, 0) = s(0, 1) = 1.0;
    return make_matrix({"1", "2"}, s);
}

double whole_wavelength_length_um(int k, double eps_eff, double freq_GHz) {
    if (k < 0 || !(eps_eff >= 1.0) || !(freq_GHz > 0.0)) throw DomainError("invalid whole-wavelength line");
    return k * kSpeedOfLight / (freq_GHz * 1e9 * std::sqrt(eps_eff)) * 1e6;
}

cplx chain_transmission(const ChainSpec& chain, double t, double alpha) {
    if (chain.gyrators.empty()) throw DomainError("a chain needs at least one gyrator");
    ConnectionGraph g;
    g.elements.push_back(element("split", ElementKind::hybrid90, hybrid_90(), true));
    g.elements.push_back(element("merge", ElementKind::hybrid90, hybrid_90(), true));
    g.elements.push_back(element("line", ElementKind::delay_line, whole_wavelength_line(1), true));
    g.elements.push_back(element("cal", ElementKind::custom, phase_shifter(chain.calibration_phase), true));
    const std::size_t n = chain.gyrators.size();
    for (std::size_t k = 0; k < n; ++k)
        g.elements.push_back(element("g" + std::to_string(k), ElementKind::custom,
                                     gyrator_2port(chain.gyrators[k], t, alpha), t == 1.0));

    g.joints.push_back({{"split", "out1"}, {"g0", "1"}});
    for (std::size_t k = 0; k + 1 < n; ++k)
        g.joints.push_back({{"g" + std::to_string(k), "2"}, {"g" + std::to_string(k + 1), "1"}});
    g.joints.push_back({{"g" + std::to_string(n - 1), "2"}, {"merge", "in1"}});
    g.joints.push_back({{"split", "out2"}, {"line", "1"}});
    g.joints.push_back({{"line", "2"}, {"cal", "1"}});
    g.joints.push_back({{"cal", "2"}, {"merge", "in2"}});
    g.external = {{{"split", "in1"}, "in"},
                  {{"split", "in2"}, "aux"},
                  {{"merge", "out1"}, "dark"},
                  {{"merge", "out2"}, "bright"}};
    const ScatteringMatrix m = connect(g);
    return m.at("dark", "in");
}

double calibrate(const ChainSpec& reference, double t, double alpha) {
    // The output is affine in the bottom-arm phasor: T(c) = u + v e^{ic}.
    ChainSpec probe = reference;
    probe.calibration_phase = 0.0;
    const cplx t0 = chain_transmission(probe, t, alpha);
    probe.calibration_phase = kPi;
    const cplx tp = chain_transmission(probe, t, alpha);
    const cplx u = (t0 + tp) / 2.0;
    const cplx v = (t0 - tp) / 2.0;
    if (std::abs(v) < 1e-15 || std::abs(std::abs(u) - std::abs(v)) > 1e-9)
        throw NumericalError("no nulling phase exists for this reference chain");
    return std::arg(-u / v);
}

ChainSpec reference_chain(const ChainSpec& chain) {
    ChainSpec ref = chain;
    for (auto& g : ref.gyrators) g.parity = Parity::even;
    return ref;
}

ChainSpec calibrated(ChainSpec chain) {
    chain.calibration_phase = calibrate(reference_chain(chain));
    return chain;
}

ChainSpec make_chain(const std::vector<Parity>& parities, PumpPort port) {
    ChainSpec c;
    for (Parity p : parities) c.gyrators.push_back({p, port});
    return c;
}

std::vector<Parity> parity_vector(unsigned bits, int n) {
    std::vector<Parity> v;
    for (int k = 0; k < n; ++k) v.push_back((bits >> k) & 1u ? Parity::odd : Parity::even);
    return v;
}

Parity total_parity(const std::vector<Parity>& v) {
    int odd = 0;
    for (Parity p : v) odd ^= (p == Parity::odd);
    return odd ? Parity::odd : Parity::even;
}

std::vector<Parity> infer_parity(const std::vector<double>& observed) {
    std::vector<Parity> out;
    for (double m : observed) {
        if (m >= 0.3 && m <= 0.7) throw NumericalError("ambiguous transmission magnitude");
        out.push_back(m < 0.5 ? Parity::even : Parity::odd);
    }
    return out;
}

std::pair<double, double> field_range(double loop_area_um2) {
    if (!(loop_area_um2 > 0.0)) throw DomainError("loop area must be > 0");
    const double a = loop_area_um2 * 1e-12;
    return {0.1 * kFluxQuantum / a, kFluxQuantum / a};
}

}  // namespace paramix
