#include "paramix/network.hpp"

#include <cmath>
#include <map>
#include <set>

#include "paramix/error.hpp"

namespace paramix {

int ScatteringMatrix::port(const std::string& label) const {
    for (const auto& p : ports)
        if (p.label == label) return p.index;
    throw DomainError("no port labelled '" + label + "'");
}

cplx ScatteringMatrix::at(const std::string& out, const std::string& in) const {
    return s(port(out), port(in));
}

ScatteringMatrix make_matrix(const std::vector<std::string>& labels, const Eigen::MatrixXcd& s,
                             double freq) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (s.rows() != n || s.cols() != n) throw DomainError("matrix size does not match port list");
    std::set<std::string> seen;
    ScatteringMatrix m;
    m.freq = freq;
    m.s = s;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (!seen.insert(labels[k]).second) throw DomainError("duplicate port label '" + labels[k] + "'");
        m.ports.push_back({static_cast<int>(k), labels[k]});
    }
    return m;
}

ScatteringMatrix hybrid_90(double phase_imbalance) {
    const double h = 1.0 / kSqrt2;
    const cplx thru{h, 0.0};
    const cplx cross{0.0, h};
    const cplx tail = std::polar(1.0, phase_imbalance);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
    // in1, in2, out1, out2
    s(2, 0) = s(0, 2) = thru;
    s(3, 1) = s(1, 3) = thru * tail;
    s(3, 0) = s(0, 3) = cross * tail;
    s(2, 1) = s(1, 2) = cross;
    return make_matrix({"in1", "in2", "out1", "out2"}, s);
}

double delay_phase(double length_um, double eps_eff, double freq_GHz) {
    return kTwoPi * freq_GHz * 1e9 * std::sqrt(eps_eff) * length_um * 1e-6 / kSpeedOfLight;
}

ScatteringMatrix delay_line(double length_um, double eps_eff, double freq_GHz) {
    if (!(length_um >= 0.0)) throw DomainError("delay line length must be >= 0");
    if (!(eps_eff >= 1.0)) throw DomainError("effective permittivity must be >= 1");
    if (!(freq_GHz > 0.0)) throw DomainError("frequency must be > 0");
    const cplx e = std::polar(1.0, delay_phase(length_um, eps_eff, freq_GHz));
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(1, 0) = s(0, 1) = e;
    return make_matrix({"1", "2"}, s, freq_GHz);
}

ScatteringMatrix lossy_coupler(double alpha, double beta, bool lossless) {
    if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("coupler coefficients must be >= 0");
    if (lossless && std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12)
        throw DomainError("lossless coupler needs alpha^2 + beta^2 = 1");
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
    const cplx branch{0.0, beta};
    // b1, b2, t3, t4
    s(1, 0) = s(0, 1) = alpha;
    s(3, 2) = s(2, 3) = alpha;
    s(2, 0) = s(0, 2) = branch;
    s(3, 1) = s(1, 3) = branch;
    return make_matrix({"b1", "b2", "t3", "t4"}, s);
}

ScatteringMatrix termination(cplx gamma) {
    Eigen::MatrixXcd s(1, 1);
    s(0, 0) = gamma;
    return make_matrix({"1"}, s);
}

ScatteringMatrix mixer_2port(cplx r_a, cplx r_b, cplx t, double phase) {
    Eigen::MatrixXcd s(2, 2);
    s(0, 0) = r_a;
    s(1, 1) = r_b;
    s(1, 0) = kI * t * std::polar(1.0, phase);
    s(0, 1) = kI * t * std::polar(1.0, -phase);
    return make_matrix({"a", "b"}, s);
}

NetworkElement element(std::string name, ElementKind kind, ScatteringMatrix m, bool lossless) {
    return NetworkElement{std::move(name), kind, std::move(m), lossless};
}

ScatteringMatrix connect(const ConnectionGraph& graph, double freq) {
    // Global wave index for every element port.
    std::map<std::pair<std::string, std::string>, int> index;
    std::vector<int> offset;
    int total = 0;
    for (const auto& el : graph.elements) {
        offset.push_back(total);
        for (const auto& p : el.matrix.ports) {
            if (!index.emplace(std::make_pair(el.name, p.label), total + p.index).second)
                throw DomainError("duplicate element/port " + el.name + "." + p.label);
        }
        total += el.matrix.size();
    }
    auto lookup = [&](const PortRef& r) {
        auto it = index.find({r.element, r.port});
        if (it == index.end()) throw DomainError("unknown port " + r.element + "." + r.port);
        return it->second;
    };

    std::vector<int> partner(total, -1);
    std::vector<int> internal;
    for (const auto& [x, y] : graph.joints) {
        const int a = lookup(x);
        const int b = lookup(y);
        if (a == b || partner[a] >= 0 || partner[b] >= 0)
            throw DomainError("port used in more than one joint: " + x.element + "." + x.port);
        partner[a] = b;
        partner[b] = a;
        internal.push_back(a);
        internal.push_back(b);
    }
    std::vector<int> ext;
    std::vector<std::string> ext_labels;
    std::vector<bool> is_ext(total, false);
    for (const auto& [r, label] : graph.external) {
        const int k = lookup(r);
        if (partner[k] >= 0 || is_ext[k]) throw DomainError("external port also joined: " + r.element + "." + r.port);
        is_ext[k] = true;
        ext.push_back(k);
        ext_labels.push_back(label);
    }
    for (int k = 0; k < total; ++k)
        if (partner[k] < 0 && !is_ext[k]) throw DomainError("dangling port in connection graph");

    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(total, total);
    for (std::size_t e = 0; e < graph.elements.size(); ++e) {
        const auto& m = graph.elements[e].matrix.s;
        block.block(offset[e], offset[e], m.rows(), m.cols()) = m;
    }

    const auto ne = static_cast<Eigen::Index>(ext.size());
    const auto ni = static_cast<Eigen::Index>(internal.size());
    Eigen::MatrixXcd see(ne, ne), sei(ne, ni), sie(ni, ne), sii(ni, ni);
    for (Eigen::Index r = 0; r < ne; ++r) {
        for (Eigen::Index c = 0; c < ne; ++c) see(r, c) = block(ext[r], ext[c]);
        for (Eigen::Index c = 0; c < ni; ++c) sei(r, c) = block(ext[r], internal[c]);
    }
    for (Eigen::Index r = 0; r < ni; ++r) {
        for (Eigen::Index c = 0; c < ne; ++c) sie(r, c) = block(internal[r], ext[c]);
        for (Eigen::Index c = 0; c < ni; ++c) sii(r, c) = block(internal[r], internal[c]);
    }

    Eigen::MatrixXcd result = see;
    if (ni > 0) {
        // Incoming internal waves are the partner's outgoing waves: a_i = P b_i.
        std::vector<Eigen::Index> pos(total, -1);
        for (Eigen::Index k = 0; k < ni; ++k) pos[internal[k]] = k;
        Eigen::MatrixXcd p_sii(ni, ni), p_sie(ni, ne);
        for (Eigen::Index k = 0; k < ni; ++k) {
            const Eigen::Index from = pos[partner[internal[k]]];
            p_sii.row(k) = sii.row(from);
            p_sie.row(k) = sie.row(from);
        }
        const Eigen::MatrixXcd sys = Eigen::MatrixXcd::Identity(ni, ni) - p_sii;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys);
        if (!(lu.rcond() > 1e-13)) throw NumericalError("non-invertible internal network");
        result += sei * lu.solve(p_sie);
        if (!result.allFinite()) throw NumericalError("non-invertible internal network");
    }
    return make_matrix(ext_labels, result, freq);
}

double unitarity_deviation(const Eigen::MatrixXcd& s) {
    const Eigen::MatrixXcd d = s.adjoint() * s - Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    return d.cwiseAbs().maxCoeff();
}

UnitarityCheck check_unitarity(const ScatteringMatrix& m, double tol) {
    if (m.s.rows() != m.s.cols()) throw DomainError("unitarity check needs a square matrix");
    const double dev = unitarity_deviation(m.s);
    return {dev <= tol, dev};
}

}  // namespace paramix
