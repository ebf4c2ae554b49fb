#include "paramix/isolator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <string>

#include "paramix/error.hpp"
#include "paramix/kernels.hpp"
#include "paramix/parallel.hpp"

namespace paramix {

double JisConfig::beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }

void set_pump_port(JisConfig& c, PumpPort port) {
    c.pump_port = port;
    c.jpc1.pump_phase = port == PumpPort::P1 ? 0.0 : kPi / 2.0;
    c.jpc2.pump_phase = port == PumpPort::P1 ? kPi / 2.0 : 0.0;
}

JisConfig default_config(double rho) {
    JisConfig c;
    for (JpcParams* p : {&c.jpc1, &c.jpc2}) {
        p->f_a = 6.84;
        p->gamma_a = 40.0;
        p->gamma_b = 100.0;
        p->f_b = p->f_a + c.f_p;
        p->rho = rho;
        p->phi_ext = -kTwoPi * 1.12;
    }
    set_pump_port(c, PumpPort::P1);
    return c;
}

JisConfig device_preset(double rho) {
    JisConfig c = default_config(rho);
    c.alpha = 0.51;
    return c;
}

void validate(const JisConfig& c) {
    validate(c.jpc1);
    validate(c.jpc2);
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw DomainError("|alpha| must lie in [0, 1]");
    if (!(c.f_p > 0.0)) throw DomainError("pump frequency must be > 0");
    if (!(c.delay.length_um >= 0.0) || !(c.delay.eps_eff >= 1.0)) throw DomainError("invalid delay line");
    const double want = c.pump_port == PumpPort::P1 ? -kPi / 2.0 : kPi / 2.0;
    const double got = std::remainder(c.jpc1.pump_phase - c.jpc2.pump_phase - want, kTwoPi);
    if (std::abs(got) > 1e-12) throw DomainError("stage pump phases disagree with the selected pump port");
}

JisPhases phases(const JisConfig& c) {
    JisPhases p{};
    p.phi_p = c.jpc1.pump_phase - c.jpc2.pump_phase;
    p.parity = (n_g(c.jpc1.phi_ext) + n_g(c.jpc2.phi_ext)) % 2;
    p.phi = p.phi_p + p.parity * kPi;
    p.phi_s = c.jpc1.pump_phase + c.jpc2.pump_phase + p.parity * kPi;
    return p;
}

ScatteringMatrix closed_form_4port(double t, double alpha, double beta, double phi, double phi_s) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) throw DomainError("closed form needs alpha^2 + beta^2 = 1");
    const std::vector<std::string> labels{"1", "2", "3", "4"};
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
    if (t == 0.0) {
        s(1, 0) = s(0, 1) = kI;
        s(2, 2) = s(3, 3) = -1.0;
        return make_matrix(labels, s);
    }
    if (beta == 0.0) throw DomainError("beta = 0 with t > 0 is singular");

    const double r = std::sqrt(1.0 - t * t);
    const double k = alpha / (beta * beta) * t * t;
    const double d = 1.0 + alpha * alpha / (beta * beta) * t * t;
    const double q = kPi / 4.0;
    auto e = [](double x) { return std::polar(1.0, x); };

    s(1, 0) = kI / d * (r - k * std::sin(phi));
    s(0, 1) = kI / d * (r + k * std::sin(phi));
    s(0, 0) = s(1, 1) = -kI * k / d * std::cos(phi);
    s(2, 2) = s(3, 3) = -r / d;
    s(2, 3) = s(3, 2) = k / d;

    const double ra = r * alpha;
    const cplx pre = -t * e(-phi_s / 2.0 + q) / (kSqrt2 * beta * d);
    const cplx post = -t * e(phi_s / 2.0 + q) / (kSqrt2 * beta * d);
    s(0, 2) = pre * (ra * e(phi / 2.0 + q) + e(-phi / 2.0 - q));
    s(0, 3) = pre * (e(phi / 2.0 + q) + ra * e(-phi / 2.0 - q));
    s(1, 2) = pre * (ra * e(phi / 2.0 - q) + e(-phi / 2.0 + q));
    s(1, 3) = pre * (e(phi / 2.0 - q) + ra * e(-phi / 2.0 + q));
    s(2, 0) = post * (ra * e(-phi / 2.0 + q) + e(phi / 2.0 - q));
    s(2, 1) = post * (ra * e(-phi / 2.0 - q) + e(phi / 2.0 + q));
    s(3, 0) = post * (e(-phi / 2.0 + q) + ra * e(phi / 2.0 - q));
    s(3, 1) = post * (e(-phi / 2.0 - q) + ra * e(phi / 2.0 + q));
    return make_matrix(labels, s);
}

TwoPort on_resonance_2port(double t, double phi) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
    const double r = std::sqrt(1.0 - t * t);
    const double k = kSqrt2 * t * t;
    const double d = 1.0 + t * t;
    TwoPort p;
    p.S21 = kI * (r - k * std::sin(phi)) / d;
    p.S12 = kI * (r + k * std::sin(phi)) / d;
    p.S11 = p.S22 = -kI * k * std::cos(phi) / d;
    return p;
}

std::vector<TwoPort> effective_2port_sweep(const JisConfig& c, const std::vector<double>& f_grid) {
    validate(c);
    if (f_grid.empty()) throw DomainError("frequency grid is empty");
    const JpcParams& a = c.jpc1;
    const JpcParams& b = c.jpc2;
    if (a.f_a != b.f_a || a.gamma_a != b.gamma_a || a.gamma_b != b.gamma_b || a.rho != b.rho)
        throw DomainError("the effective two-port model assumes identical mixer stages");

    const JisPhases ph = phases(c);
    const kernels::JisArgs args{{a.f_a, 2.0 / (a.gamma_a * 1e-3), 2.0 / (a.gamma_b * 1e-3), a.rho},
                                std::sin(ph.phi),
                                std::cos(ph.phi)};
    const std::size_t n = f_grid.size();
    std::vector<double> are(n), aim(n);
    std::vector<double> buf(6 * n);
    const kernels::JisOut out{buf.data(), buf.data() + n, buf.data() + 2 * n,
                              buf.data() + 3 * n, buf.data() + 4 * n, buf.data() + 5 * n};
    const kernels::Backend backend = kernels::active_backend();
    std::vector<long> first_bad;
    std::mutex guard;
    parallel_for(n, kernels::kLanes, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const cplx al = std::polar(c.alpha, delay_phase(c.delay.length_um, c.delay.eps_eff, f_grid[k] + c.f_p));
            are[k] = al.real();
            aim[k] = al.imag();
        }
        const kernels::JisIn in{f_grid.data() + lo, are.data() + lo, aim.data() + lo};
        const kernels::JisOut o{out.s21_re + lo, out.s21_im + lo, out.s12_re + lo,
                                out.s12_im + lo, out.s11_re + lo, out.s11_im + lo};
        const long bad = kernels::jis(backend, args, hi - lo, in, o);
        if (bad >= 0) {
            std::lock_guard<std::mutex> lock(guard);
            first_bad.push_back(static_cast<long>(lo) + bad);
        }
    });
    if (!first_bad.empty()) {
        const long k = *std::min_element(first_bad.begin(), first_bad.end());
        char msg[160];
        std::snprintf(msg, sizeof msg, "internal resonance singularity: |1 - r_b^2 alpha^2| < 1e-12 at f = %.9g GHz",
                      f_grid[static_cast<std::size_t>(k)]);
        throw NumericalError(msg);
    }
    std::vector<TwoPort> res(n);
    for (std::size_t k = 0; k < n; ++k) {
        res[k].f = f_grid[k];
        res[k].S21 = {out.s21_re[k], out.s21_im[k]};
        res[k].S12 = {out.s12_re[k], out.s12_im[k]};
        res[k].S11 = res[k].S22 = {out.s11_re[k], out.s11_im[k]};
    }
    return res;
}

TwoPort effective_2port_point(const JisConfig& c, double f) { return effective_2port_sweep(c, {f}).front(); }

ScatteringMatrix composed_4port(const StageResponse& s1, const StageResponse& s2, double alpha, double beta,
                                double hybrid_imbalance, double b_line_phase) {
    // The b-mode line is split evenly between the two coupler inputs, so the
    // b1-b2 path carries the full delay.
    Eigen::MatrixXcd half = Eigen::MatrixXcd::Zero(2, 2);
    half(1, 0) = half(0, 1) = std::polar(1.0, b_line_phase / 2.0);
    const ScatteringMatrix line = make_matrix({"1", "2"}, half);
    ConnectionGraph g;
    g.elements.push_back(element("hyb", ElementKind::hybrid90, hybrid_90(hybrid_imbalance), true));
    g.elements.push_back(element("jpc1", ElementKind::mixer_2port, mixer_2port(s1.r_a, s1.r_b, s1.t, s1.phase), true));
    g.elements.push_back(element("jpc2", ElementKind::mixer_2port, mixer_2port(s2.r_a, s2.r_b, s2.t, s2.phase), true));
    g.elements.push_back(element("line1", ElementKind::delay_line, line, true));
    g.elements.push_back(element("line2", ElementKind::delay_line, line, true));
    g.elements.push_back(element("cpl", ElementKind::lossy_coupler, lossy_coupler(alpha, beta), true));
    g.joints = {{{"hyb", "out1"}, {"jpc1", "a"}},   {{"hyb", "out2"}, {"jpc2", "a"}},
                {{"jpc1", "b"}, {"line1", "1"}},    {{"line1", "2"}, {"cpl", "b1"}},
                {{"jpc2", "b"}, {"line2", "1"}},    {{"line2", "2"}, {"cpl", "b2"}}};
    g.external = {{{"hyb", "in1"}, "1"}, {{"hyb", "in2"}, "2"}, {{"cpl", "t3"}, "3"}, {{"cpl", "t4"}, "4"}};
    return connect(g);
}

ScatteringMatrix composed_4port(double t, double alpha, double beta, double phi, double phi_s) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
    const double r = std::sqrt(1.0 - t * t);
    const StageResponse s1{r, r, t, (phi_s + phi) / 2.0};
    const StageResponse s2{r, r, t, (phi_s - phi) / 2.0};
    return composed_4port(s1, s2, alpha, beta);
}

ScatteringMatrix composed_4port(const JisConfig& c, double f) {
    validate(c);
    const JisPhases ph = phases(c);
    const JpcResponse a = response(f, c.jpc1);
    const JpcResponse b = response(f, c.jpc2);
    const StageResponse s1{a.r_a, a.r_b, a.t, (ph.phi_s + ph.phi) / 2.0};
    const StageResponse s2{b.r_a, b.r_b, b.t, (ph.phi_s - ph.phi) / 2.0};
    const double line = delay_phase(c.delay.length_um, c.delay.eps_eff, f + c.f_p);
    ScatteringMatrix m = composed_4port(s1, s2, c.alpha, c.beta(), c.hybrid_imbalance, line);
    m.freq = f;
    return m;
}

double added_noise(double forward_power_transmission) {
    const double g = forward_power_transmission;
    if (!(g > 0.0 && g <= 1.0)) throw DomainError("forward power transmission must lie in (0, 1]");
    return (1.0 / g - 1.0) / 2.0;
}

}  // namespace paramix
