#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "paramix/constants.hpp"

namespace paramix {

struct PortId {
    int index = 0;
    std::string label;
};

// s(i, j) is the wave leaving port i per unit wave entering port j.
struct ScatteringMatrix {
    double freq = 0.0;  // GHz
    std::vector<PortId> ports;
    Eigen::MatrixXcd s;

    int size() const { return static_cast<int>(ports.size()); }
    int port(const std::string& label) const;  // throws if absent
    cplx at(const std::string& out, const std::string& in) const;
};

ScatteringMatrix make_matrix(const std::vector<std::string>& labels,
                             const Eigen::MatrixXcd& s, double freq = 0.0);

enum class ElementKind { hybrid90, delay_line, lossy_coupler, termination, mixer_2port, custom };

struct NetworkElement {
    std::string name;
    ElementKind kind = ElementKind::custom;
    ScatteringMatrix matrix;
    bool lossless = false;
};

struct PortRef {
    std::string element;
    std::string port;
};

struct ConnectionGraph {
    std::vector<NetworkElement> elements;
    std::vector<std::pair<PortRef, PortRef>> joints;
    // External ports in output order, each with the label it carries outside.
    std::vector<std::pair<PortRef, std::string>> external;
};

// Ports in1, in2, out1, out2. Through in1->out1, in2->out2 is 1/sqrt2,
// cross is i/sqrt2. A nonzero imbalance adds a phase to the out2 arm.
ScatteringMatrix hybrid_90(double phase_imbalance = 0.0);

// Ports "1", "2".
ScatteringMatrix delay_line(double length_um, double eps_eff, double freq_GHz);
double delay_phase(double length_um, double eps_eff, double freq_GHz);

// Ports b1, b2 (through alpha) and t3, t4 (branch i*beta). b1 couples to t3.
ScatteringMatrix lossy_coupler(double alpha, double beta, bool lossless = true);

// One-port with reflection gamma (0 = matched load).
ScatteringMatrix termination(cplx gamma = {0.0, 0.0});

// Ports a, b. Conversion a->b carries i*t*e^{+i phase}, b->a carries
// i*t*e^{-i phase}.
ScatteringMatrix mixer_2port(cplx r_a, cplx r_b, cplx t, double phase);

NetworkElement element(std::string name, ElementKind kind, ScatteringMatrix m, bool lossless);

// Eliminates every internal wave by one dense solve. Throws NumericalError
// on a singular internal system.
ScatteringMatrix connect(const ConnectionGraph& graph, double freq = 0.0);

struct UnitarityCheck {
    bool ok = false;
    double max_deviation = 0.0;
};
UnitarityCheck check_unitarity(const ScatteringMatrix& m, double tol);
double unitarity_deviation(const Eigen::MatrixXcd& s);

}  // namespace paramix
