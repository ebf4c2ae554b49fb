#include "paramix/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "paramix/acceptance.hpp"
#include "paramix/error.hpp"
#include "paramix/io.hpp"
#include "paramix/kernels.hpp"
#include "paramix/parallel.hpp"

namespace paramix {

namespace {

using config::json;
namespace fs = std::filesystem;

json jnum(double v) {
    if (!std::isfinite(v)) return nullptr;
    return io::round9(v);
}

json header(const char* kind) { return json{{"schema", "paramix/1"}, {"kind", kind}}; }

std::string path_in(const RunOptions& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    return (fs::path(opt.out_dir) / name).string();
}

void emit_json(const RunOptions& opt, const std::string& name, const json& doc, const std::string& def,
               std::ostream& log) {
    config::check_output(doc, def);
    const std::string p = path_in(opt, name);
    io::write_text(p, doc.dump(2) + "\n");
    log << "wrote " << p << '\n';
}

void emit_table(const RunOptions& opt, const std::string& stem, const io::Csv& csv, std::ostream& log) {
    if (opt.format == "json") {
        json doc = header(stem.c_str());
        doc["columns"] = csv.header;
        json rows = json::array();
        for (const auto& r : csv.rows) {
            json row = json::array();
            for (double v : r) row.push_back(jnum(v));
            rows.push_back(row);
        }
        doc["rows"] = rows;
        emit_json(opt, stem + ".json", doc, "table", log);
        return;
    }
    if (opt.format != "csv") throw ConfigError("format '" + opt.format + "' is not available for " + stem);
    const std::string p = path_in(opt, stem + ".csv");
    io::write_csv(p, csv);
    log << "wrote " << p << '\n';
}

int cmd_jpc_sweep(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const JpcParams p = config::stage_from(cfg.at("jpc"));
    try {
        validate(p);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("/jpc: ") + e.what());
    }
    const std::vector<double> f =
        cfg.contains("grid") ? config::grid_from(cfg.at("grid")) : linear_grid(p.f_a - 0.15, p.f_a + 0.15, 2001);
    const std::size_t n = f.size();
    std::vector<double> buf(6 * n);
    const kernels::JpcArgs args{p.f_a, 2.0 / (p.gamma_a * 1e-3), 2.0 / (p.gamma_b * 1e-3), p.rho};
    const kernels::Backend backend = kernels::active_backend();
    parallel_for(n, kernels::kLanes, [&](std::size_t lo, std::size_t hi) {
        double* b = buf.data();
        const kernels::JpcOut out{b + lo, b + n + lo, b + 2 * n + lo, b + 3 * n + lo, b + 4 * n + lo, b + 5 * n + lo};
        kernels::jpc(backend, args, hi - lo, f.data() + lo, out);
    });
    io::Csv csv{{"f_GHz", "t_sq", "r_a_sq", "t_arg_rad"}, {}, {}};
    for (std::size_t k = 0; k < n; ++k) {
        const cplx t{buf[k], buf[n + k]};
        const cplx ra{buf[2 * n + k], buf[3 * n + k]};
        csv.rows.push_back({f[k], std::norm(t), std::norm(ra), std::arg(t)});
    }
    emit_table(opt, "jpc-sweep", csv, log);
    return kExitOk;
}

int cmd_jis_sweep(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const JisConfig c = config::jis_from(cfg.at("jis"));
    const std::vector<double> f = cfg.contains("grid") ? config::grid_from(cfg.at("grid")) : default_grid(c);
    const SweepResult r = run_sweep(c, f);

    if (opt.format == "touchstone") {
        io::Touchstone ts;
        ts.ports = 2;
        ts.comments = {"paramix jis-sweep, effective two-port model"};
        for (const auto& p : r.s) {
            Eigen::MatrixXcd m(2, 2);
            m << p.S11, p.S12, p.S21, p.S22;
            ts.f_GHz.push_back(p.f);
            ts.s.push_back(m);
        }
        const std::string p = path_in(opt, "jis-sweep.s2p");
        io::write_touchstone(p, ts);
        log << "wrote " << p << '\n';
    } else {
        io::Csv csv{{"f_GHz", "S21_dB", "S12_dB", "S11_dB", "S22_dB"}, {}, {}};
        for (const auto& p : r.s)
            csv.rows.push_back({p.f, to_power_dB(p.S21), to_power_dB(p.S12), to_power_dB(p.S11), to_power_dB(p.S22)});
        emit_table(opt, "jis-sweep", csv, log);
    }

    const Trace which = isolated_trace(c);
    const JisPhases ph = phases(c);
    json side = header("jis-sweep-summary");
    side["isolated_trace"] = which == Trace::S12 ? "S12" : "S21";
    side["points"] = f.size();
    side["parity"] = ph.parity;
    side["phi_rad"] = jnum(std::remainder(ph.phi, kTwoPi));
    try {
        const Bandwidth bw = bandwidth_3dB(r, which);
        side["dip"] = {{"f_GHz", jnum(bw.f_dip)},
                       {"gamma_MHz", jnum(bw.gamma)},
                       {"L", jnum(bw.L)},
                       {"L_dB", jnum(10.0 * std::log10(bw.L))}};
    } catch (const NumericalError& e) {
        side["dip_error"] = e.what();
    }
    emit_json(opt, "jis-sweep.summary.json", side, "jis_sweep_summary", log);
    return kExitOk;
}

int cmd_jis_4port(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const JisConfig c = config::jis_from(cfg.at("jis"));
    const double f = cfg.value("f_GHz", c.jpc1.f_a);
    const std::string model = cfg.value("model", std::string("closed"));
    ScatteringMatrix m;
    if (model == "closed") {
        if (c.jpc1.rho != c.jpc2.rho) throw ConfigError("/jis: the closed form needs equal stage pump amplitudes");
        if (f != c.jpc1.f_a || c.jpc1.f_a != c.jpc2.f_a)
            throw ConfigError("/f_GHz: the closed form holds on resonance only");
        const JisPhases ph = phases(c);
        m = closed_form_4port(t_on_resonance(c.jpc1.rho), c.alpha, c.beta(), ph.phi, ph.phi_s);
        m.freq = f;
    } else {
        m = composed_4port(c, f);
    }
    if (opt.format == "touchstone") {
        io::Touchstone ts;
        ts.ports = 4;
        ts.comments = {"paramix jis-4port, " + model + " model; ports 3 and 4 are the cold terminations"};
        ts.f_GHz = {f};
        ts.s = {m.s};
        const std::string p = path_in(opt, "jis-4port.s4p");
        io::write_touchstone(p, ts);
        log << "wrote " << p << '\n';
        return kExitOk;
    }
    if (opt.format == "json") {
        json doc = header("four-port-report");
        doc["model"] = model;
        doc["f_GHz"] = jnum(f);
        doc["unitarity_deviation"] = jnum(unitarity_deviation(m.s));
        json rows = json::array();
        for (int r = 0; r < 4; ++r) {
            json row = json::array();
            for (int k = 0; k < 4; ++k) row.push_back({jnum(m.s(r, k).real()), jnum(m.s(r, k).imag())});
            rows.push_back(row);
        }
        doc["S"] = rows;
        emit_json(opt, "jis-4port.json", doc, "four_port_report", log);
        return kExitOk;
    }
    io::Csv csv{{"out_port", "in_port", "re", "im", "power_dB"}, {}, {}};
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k)
            csv.rows.push_back({double(r + 1), double(k + 1), m.s(r, k).real(), m.s(r, k).imag(), to_power_dB(m.s(r, k))});
    emit_table(opt, "jis-4port", csv, log);
    return kExitOk;
}

double measured(const json& m, const char* lin, const char* db) {
    if (m.contains(lin) == m.contains(db))
        throw ConfigError(std::string("/measured: give exactly one of ") + lin + " and " + db);
    if (m.contains(lin)) return m.at(lin).get<double>();
    return std::pow(10.0, m.at(db).get<double>() / 10.0);
}

int cmd_fit(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const JisConfig c = config::jis_from(cfg.contains("jis") ? cfg.at("jis") : json::object());
    const json& m = cfg.at("measured");
    const double m21 = measured(m, "S21_sq", "S21_dB");
    const double m12 = measured(m, "S12_sq", "S12_dB");
    FitOptions fo;
    fo.grid_step = cfg.value("grid_step", fo.grid_step);
    const std::string branch = cfg.value("branch", std::string("auto"));
    fo.branch = branch == "below_match" ? FitBranch::below_match
              : branch == "above_match" ? FitBranch::above_match
                                        : FitBranch::automatic;
    const FitResult r = fit_rho_alpha(m21, m12, c, fo);
    json doc = header("fit-result");
    doc["rho"] = jnum(r.rho);
    doc["alpha"] = jnum(r.alpha);
    doc["residual"] = jnum(r.residual);
    doc["ambiguous"] = r.ambiguous;
    doc["alpha_identifiable"] = r.alpha_identifiable;
    json sols = json::array();
    for (const auto& s : r.solutions)
        sols.push_back({{"rho", jnum(s.rho)}, {"alpha", jnum(s.alpha)}, {"residual", jnum(s.residual)}, {"branch", s.branch}});
    doc["solutions"] = sols;
    emit_json(opt, "fit.json", doc, "fit_result", log);
    if (!r.alpha_identifiable) {
        log << "error: non-identifiable: |alpha| has no effect at rho = 0\n";
        return kExitNumerical;
    }
    if (r.ambiguous) log << "note: " << r.solutions.size() << " exact solutions; tie broken by smallest rho\n";
    return kExitOk;
}

int cmd_parity(const json& cfg, const RunOptions& opt, std::ostream& log) {
    std::vector<ChainSpec> chains;
    if (cfg.contains("chains")) {
        for (const auto& ch : cfg.at("chains")) {
            std::vector<Parity> v;
            for (const auto& p : ch.at("parities")) v.push_back(config::parity_from(p.get<std::string>()));
            chains.push_back(make_chain(v, config::pump_port_from(ch.value("pump_port", std::string("P1")))));
        }
    }
    if (cfg.contains("enumerate")) {
        const json& e = cfg.at("enumerate");
        const int max_n = e.at("max_n").get<int>();
        const PumpPort port = config::pump_port_from(e.value("pump_port", std::string("P1")));
        for (int n = 1; n <= max_n; ++n)
            for (unsigned bits = 0; bits < (1u << n); ++bits) chains.push_back(make_chain(parity_vector(bits, n), port));
    }
    if (chains.empty()) throw ConfigError("(root): parity needs \"chains\" or \"enumerate\"");

    json doc = header("parity-table");
    json rows = json::array();
    bool all = true;
    for (const ChainSpec& raw : chains) {
        const ChainSpec ch = calibrated(raw);
        std::vector<Parity> v;
        json names = json::array();
        bool reference = true;
        for (const auto& g : ch.gyrators) {
            v.push_back(g.parity);
            names.push_back(g.parity == Parity::odd ? "odd" : "even");
            reference = reference && g.parity == Parity::even;
        }
        const double mag = std::abs(chain_transmission(ch));
        const int expected = total_parity(v) == Parity::odd ? 1 : 0;
        const bool match = std::abs(mag - expected) < 1e-12;
        all = all && match;
        rows.push_back({{"parities", names},
                        {"pump_port", config::pump_port_name(ch.gyrators.front().pump_port)},
                        {"T_abs", jnum(std::abs(mag) < 1e-12 ? 0.0 : mag)},
                        {"expected", expected},
                        {"match", match},
                        {"reference", reference}});
    }
    doc["all_match"] = all;
    doc["rows"] = rows;
    if (cfg.contains("loop_area_um2")) {
        const auto [lo, hi] = field_range(cfg.at("loop_area_um2").get<double>());
        doc["field_range_T"] = {jnum(lo), jnum(hi)};
    }
    emit_json(opt, "parity.json", doc, "parity_table", log);
    if (!all) {
        log << "error: parity table disagrees with the XOR rule\n";
        return kExitCheck;
    }
    return kExitOk;
}

int cmd_readout(const json& cfg, const RunOptions& opt, std::ostream& log) {
    std::vector<ReadoutChainRecord> recs;
    for (const auto& r : cfg.at("records")) recs.push_back(config::record_from(r));
    auto index_of = [&](const std::string& label, const char* where) {
        for (std::size_t k = 0; k < recs.size(); ++k)
            if (recs[k].label == label) return k;
        throw ConfigError(std::string(where) + ": no record labelled '" + label + "'");
    };
    const std::size_t base = cfg.contains("baseline") ? index_of(cfg.at("baseline").get<std::string>(), "/baseline") : 0;
    const auto table = backaction_table(recs, base);

    json doc = header("readout-report");
    json rows = json::array();
    io::Csv csv{{"label", "T1_us", "T2E_us", "T_phi_us", "n_bar", "n_th", "n_ba"}, {}, {}};
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const auto& b = table[k];
        json row{{"label", b.label}, {"T_phi_us", jnum(b.T_phi)}, {"n_bar", jnum(b.n_bar)},
                 {"n_th", jnum(b.n_th)}, {"n_ba", jnum(b.n_ba)}};
        const double theta = theta_from_chi_kappa(recs[k].chi, recs[k].kappa);
        row["theta_deg"] = jnum(theta);
        if (recs[k].I_over_sigma) row["eta"] = jnum(eta_from_separation(recs[k], theta));
        rows.push_back(row);
        csv.labels.push_back(recs[k].label);
        csv.rows.push_back({recs[k].T1, recs[k].T2E, b.T_phi, b.n_bar, b.n_th, b.n_ba});
    }
    doc["rows"] = rows;
    if (cfg.contains("isolation_from")) {
        const json& p = cfg.at("isolation_from");
        doc["isolation_dB"] = jnum(isolation_estimate_dB(p.at("n_ba_off").get<double>(), p.at("n_ba_on").get<double>()));
    } else if (cfg.contains("isolation_pair")) {
        const json& p = cfg.at("isolation_pair");
        const auto off = index_of(p.at("off").get<std::string>(), "/isolation_pair/off");
        const auto on = index_of(p.at("on").get<std::string>(), "/isolation_pair/on");
        doc["isolation_dB"] = jnum(isolation_estimate_dB(table[off].n_ba, table[on].n_ba));
    }
    if (opt.format == "csv") {
        const std::string p = path_in(opt, "readout.csv");
        io::write_csv(p, csv);
        log << "wrote " << p << '\n';
    }
    emit_json(opt, "readout.json", doc, "readout_report", log);
    return kExitOk;
}

int cmd_flux_curve(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const JrmParams jrm = config::jrm_from(cfg.contains("jrm") ? cfg.at("jrm") : json::object());
    double lo = -1.4, hi = 1.4;
    int points = 561;
    if (cfg.contains("flux")) {
        lo = cfg.at("flux").at("start").get<double>();
        hi = cfg.at("flux").at("stop").get<double>();
        points = cfg.at("flux").at("points").get<int>();
        if (!(hi > lo)) throw ConfigError("/flux: stop must exceed start");
    }
    io::Csv csv{{"phi_ext_over_2pi", "f_GHz"}, {}, {}};
    for (double x : linear_grid(lo, hi, points)) csv.rows.push_back({x, flux_tuning_curve(x * kTwoPi, jrm)});
    emit_table(opt, "flux-curve", csv, log);
    return kExitOk;
}

int cmd_bandwidth_scan(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const JisConfig c = config::jis_from(cfg.contains("jis") ? cfg.at("jis") : json{{"preset", "device"}});
    std::vector<double> rhos = cfg.at("rho_list").get<std::vector<double>>();
    const auto scan = bandwidth_attenuation_scan(c, rhos, false);
    const double g0 = gamma0(c.jpc1.gamma_a, c.jpc1.gamma_b);
    json doc = header("bandwidth-scan-report");
    doc["gamma0_MHz"] = jnum(g0);
    json rows = json::array();
    const double nan = std::nan("");
    io::Csv csv{{"rho", "L", "sqrt_L", "gamma_MHz", "gamma_ref_MHz", "ratio", "f_dip_GHz"}, {}, {}};
    for (const auto& s : scan) {
        json row{{"rho", jnum(s.rho)}, {"ok", s.ok}, {"L", jnum(s.bw.L)}, {"gamma_ref_MHz", jnum(s.gamma_ref)}};
        if (s.ok) {
            row["gamma_MHz"] = jnum(s.bw.gamma);
            row["ratio"] = jnum(s.bw.gamma / s.gamma_ref);
            row["f_dip_GHz"] = jnum(s.bw.f_dip);
            csv.rows.push_back({s.rho, s.bw.L, s.sqrt_L, s.bw.gamma, s.gamma_ref, s.bw.gamma / s.gamma_ref, s.bw.f_dip});
        } else {
            row["error"] = s.error;
            csv.rows.push_back({s.rho, s.bw.L, s.sqrt_L, nan, s.gamma_ref, nan, nan});
        }
        rows.push_back(row);
    }
    doc["rows"] = rows;
    if (opt.format == "csv") {
        const std::string p = path_in(opt, "bandwidth-scan.csv");
        io::write_csv(p, csv);
        log << "wrote " << p << '\n';
    }
    emit_json(opt, "bandwidth-scan.json", doc, "bandwidth_scan_report", log);
    const auto failed = std::count_if(scan.begin(), scan.end(), [](const ScanPoint& s) { return !s.ok; });
    if (failed > 0) {
        log << "numerical error: " << failed << " of " << scan.size() << " points have no measurable dip\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int run_selftest(const std::vector<int>& criteria, std::ostream& log) {
    std::vector<int> ids = criteria;
    if (ids.empty())
        for (int k = 1; k <= acceptance::kCount; ++k) ids.push_back(k);
    bool all = true;
    int passed = 0;
    for (int id : ids) {
        const acceptance::Result r = acceptance::run(id);
        log << acceptance::format(r) << '\n';
        all = all && r.pass;
        passed += r.pass;
    }
    log << passed << "/" << ids.size() << " criteria passed\n";
    return all ? kExitOk : kExitCheck;
}

namespace {

int dispatch(const json& cfg, const RunOptions& opt, std::ostream& log) {
    const std::string cmd = cfg.at("command").get<std::string>();
    if (opt.format != "csv" && opt.format != "json" && opt.format != "touchstone")
        throw ConfigError("--format must be csv, json or touchstone");
    if (opt.format == "touchstone" && cmd != "jis-sweep" && cmd != "jis-4port")
        throw ConfigError("touchstone output exists only for jis-sweep and jis-4port");
    if (cmd == "jpc-sweep") return cmd_jpc_sweep(cfg, opt, log);
    if (cmd == "jis-sweep") return cmd_jis_sweep(cfg, opt, log);
    if (cmd == "jis-4port") return cmd_jis_4port(cfg, opt, log);
    if (cmd == "fit") return cmd_fit(cfg, opt, log);
    if (cmd == "parity") return cmd_parity(cfg, opt, log);
    if (cmd == "readout") return cmd_readout(cfg, opt, log);
    if (cmd == "flux-curve") return cmd_flux_curve(cfg, opt, log);
    if (cmd == "bandwidth-scan") return cmd_bandwidth_scan(cfg, opt, log);
    if (cmd == "selftest") {
        std::vector<int> ids;
        if (cfg.contains("criteria")) ids = cfg.at("criteria").get<std::vector<int>>();
        return run_selftest(ids, log);
    }
    throw ConfigError("unknown command '" + cmd + "'");
}

}  // namespace

int run_command(const config::Document& doc, const RunOptions& opt, std::ostream& log) {
    try {
        return dispatch(doc.value, opt, log);
    } catch (const ConfigError& e) {
        throw ConfigError(config::locate(doc, e.what()));
    }
}

}  // namespace paramix
