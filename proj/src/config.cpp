#include "paramix/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paramix/error.hpp"
#include "paramix/io.hpp"

namespace paramix::detail {
extern const char* const kSchemaText;
}

namespace paramix::config {

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

struct Scanner {
    const std::string& s;
    LineMap& out;
    std::size_t i = 0;
    int line = 1;

    void ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) {
            if (s[i] == '\n') ++line;
            ++i;
        }
    }
    std::string str() {
        std::string v;
        ++i;  // opening quote
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\' && i + 1 < s.size()) {
                ++i;
                if (s[i] == 'u') {
                    i += 4;  // keys with \u escapes keep a placeholder
                    v += '?';
                } else {
                    v += s[i];
                }
            } else {
                v += s[i];
            }
            ++i;
        }
        ++i;
        return v;
    }
    void value(const std::string& ptr) {
        ws();
        if (i >= s.size()) return;
        out.emplace(ptr, line);
        if (s[i] == '{') {
            ++i;
            for (;;) {
                ws();
                if (i >= s.size() || s[i] == '}') break;
                if (s[i] == ',') {
                    ++i;
                    continue;
                }
                const int key_line = line;
                const std::string key = str();
                ws();
                if (i < s.size() && s[i] == ':') ++i;
                const std::string child = ptr + "/" + escape_token(key);
                value(child);
                // Report keys at the line of the key itself.
                out[child] = std::min(out[child], key_line);
            }
            ++i;
        } else if (s[i] == '[') {
            ++i;
            int k = 0;
            for (;;) {
                ws();
                if (i >= s.size() || s[i] == ']') break;
                if (s[i] == ',') {
                    ++i;
                    continue;
                }
                value(ptr + "/" + std::to_string(k++));
            }
            ++i;
        } else if (s[i] == '"') {
            str();
        } else {
            while (i < s.size() && std::string(",]} \t\r\n").find(s[i]) == std::string::npos) ++i;
        }
    }
};

const json& resolve(const std::string& ref) {
    if (ref.rfind("#/", 0) != 0) throw Error("unsupported schema reference " + ref);
    return schema().at(json::json_pointer(ref.substr(1)));
}

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "number") return v.is_number();
    if (t == "integer") {
        if (v.is_number_integer()) return true;
        if (!v.is_number_float()) return false;
        const double d = v.get<double>();
        return std::isfinite(d) && d == std::floor(d);
    }
    return false;
}

std::string brief(const json& v) {
    std::string s = v.dump();
    if (s.size() > 40) s = s.substr(0, 37) + "...";
    return s;
}

void validate(const json& v, const json& sch, const std::string& ptr, std::vector<Issue>& issues) {
    if (sch.is_boolean()) {
        if (!sch.get<bool>()) issues.push_back({ptr, "value not allowed"});
        return;
    }
    if (auto it = sch.find("$ref"); it != sch.end()) validate(v, resolve(it->get<std::string>()), ptr, issues);
    if (auto it = sch.find("type"); it != sch.end()) {
        bool ok = false;
        std::string names;
        if (it->is_string()) {
            ok = type_matches(v, it->get<std::string>());
            names = it->get<std::string>();
        } else {
            for (const auto& t : *it) {
                ok = ok || type_matches(v, t.get<std::string>());
                names += (names.empty() ? "" : " or ") + t.get<std::string>();
            }
        }
        if (!ok) {
            issues.push_back({ptr, "expected " + names + ", got " + brief(v)});
            return;
        }
    }
    if (auto it = sch.find("const"); it != sch.end() && v != *it)
        issues.push_back({ptr, "must equal " + it->dump()});
    if (auto it = sch.find("enum"); it != sch.end()) {
        bool found = false;
        for (const auto& e : *it) found = found || v == e;
        if (!found) issues.push_back({ptr, brief(v) + " is not one of " + it->dump()});
    }
    if (v.is_number()) {
        const double d = v.get<double>();
        if (auto it = sch.find("minimum"); it != sch.end() && d < it->get<double>())
            issues.push_back({ptr, brief(v) + " is below the minimum " + it->dump()});
        if (auto it = sch.find("maximum"); it != sch.end() && d > it->get<double>())
            issues.push_back({ptr, brief(v) + " exceeds the maximum " + it->dump()});
        if (auto it = sch.find("exclusiveMinimum"); it != sch.end() && d <= it->get<double>())
            issues.push_back({ptr, brief(v) + " must be greater than " + it->dump()});
        if (auto it = sch.find("exclusiveMaximum"); it != sch.end() && d >= it->get<double>())
            issues.push_back({ptr, brief(v) + " must be less than " + it->dump()});
    }
    if (v.is_string()) {
        if (auto it = sch.find("minLength"); it != sch.end() && v.get<std::string>().size() < it->get<std::size_t>())
            issues.push_back({ptr, "string is too short"});
    }
    if (v.is_object()) {
        if (auto it = sch.find("required"); it != sch.end())
            for (const auto& k : *it)
                if (!v.contains(k.get<std::string>()))
                    issues.push_back({ptr, "missing required key \"" + k.get<std::string>() + "\""});
        const json* props = nullptr;
        if (auto it = sch.find("properties"); it != sch.end()) props = &*it;
        for (const auto& [key, child] : v.items()) {
            const std::string cp = ptr + "/" + escape_token(key);
            if (props && props->contains(key)) {
                validate(child, props->at(key), cp, issues);
            } else if (auto ap = sch.find("additionalProperties"); ap != sch.end()) {
                if (ap->is_boolean() && !ap->get<bool>()) issues.push_back({cp, "unknown key \"" + key + "\""});
                else if (ap->is_object()) validate(child, *ap, cp, issues);
            }
        }
    }
    if (v.is_array()) {
        if (auto it = sch.find("minItems"); it != sch.end() && v.size() < it->get<std::size_t>())
            issues.push_back({ptr, "needs at least " + it->dump() + " items"});
        if (auto it = sch.find("maxItems"); it != sch.end() && v.size() > it->get<std::size_t>())
            issues.push_back({ptr, "allows at most " + it->dump() + " items"});
        if (auto it = sch.find("items"); it != sch.end())
            for (std::size_t k = 0; k < v.size(); ++k) validate(v[k], *it, ptr + "/" + std::to_string(k), issues);
    }
    if (auto it = sch.find("allOf"); it != sch.end())
        for (const auto& sub : *it) validate(v, sub, ptr, issues);
    if (auto it = sch.find("if"); it != sch.end()) {
        std::vector<Issue> probe;
        validate(v, *it, ptr, probe);
        if (probe.empty()) {
            if (auto th = sch.find("then"); th != sch.end()) validate(v, *th, ptr, issues);
        } else if (auto el = sch.find("else"); el != sch.end()) {
            validate(v, *el, ptr, issues);
        }
    }
}

int line_for(const LineMap& lines, std::string ptr) {
    for (;;) {
        if (auto it = lines.find(ptr); it != lines.end()) return it->second;
        const auto cut = ptr.rfind('/');
        if (cut == std::string::npos) return 1;
        ptr.resize(cut);
    }
}

double num(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

LineMap line_map(const std::string& text) {
    LineMap m;
    Scanner sc{text, m};
    sc.value("");
    return m;
}

const json& schema() {
    static const json s = json::parse(detail::kSchemaText);
    return s;
}

std::vector<Issue> check(const json& doc, const std::string& def) {
    std::vector<Issue> issues;
    validate(doc, def.empty() ? schema() : resolve("#/$defs/" + def), "", issues);
    return issues;
}

Document parse(const std::string& text, const std::string& path) {
    Document d;
    d.path = path;
    try {
        d.value = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1;
        for (std::size_t k = 0; k < std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size()); ++k)
            line += text[k] == '\n';
        throw ConfigError(path + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
    }
    d.lines = line_map(text);
    std::vector<Issue> issues;
    for (const auto& i : check(d.value)) {
        const bool seen = std::any_of(issues.begin(), issues.end(), [&](const Issue& o) {
            return o.pointer == i.pointer && o.message == i.message;
        });
        if (!seen) issues.push_back(i);
    }
    if (!issues.empty()) {
        std::ostringstream msg;
        for (std::size_t k = 0; k < issues.size(); ++k) {
            if (k) msg << '\n';
            msg << path << ':' << line_for(d.lines, issues[k].pointer) << ": "
                << (issues[k].pointer.empty() ? "(root)" : issues[k].pointer) << ": " << issues[k].message;
        }
        throw ConfigError(msg.str());
    }
    return d;
}

std::string locate(const Document& doc, const std::string& message) {
    if (message.empty() || message[0] != '/') return message;
    const std::string ptr = message.substr(0, message.find(':'));
    return doc.path + ":" + std::to_string(line_for(doc.lines, ptr)) + ": " + message;
}

Document load(const std::string& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return parse(text, path);
}

void check_output(const json& doc, const std::string& def) {
    const auto issues = check(doc, def);
    if (!issues.empty()) throw Error("emitted document fails schema " + def + " at " + issues[0].pointer + ": " + issues[0].message);
}

PumpPort pump_port_from(const std::string& s) {
    if (s == "P1") return PumpPort::P1;
    if (s == "P2") return PumpPort::P2;
    throw ConfigError("unknown pump port '" + s + "'");
}

std::string pump_port_name(PumpPort p) { return p == PumpPort::P1 ? "P1" : "P2"; }

Parity parity_from(const std::string& s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    throw ConfigError("unknown parity '" + s + "'");
}

JpcParams stage_from(const json& j, JpcParams p) {
    p.f_a = num(j, "f_a_GHz", p.f_a);
    p.f_b = num(j, "f_b_GHz", p.f_b);
    p.gamma_a = num(j, "gamma_a_MHz", p.gamma_a);
    p.gamma_b = num(j, "gamma_b_MHz", p.gamma_b);
    p.rho = num(j, "rho", p.rho);
    p.phi_ext = num(j, "phi_ext_rad", p.phi_ext);
    p.pump_phase = num(j, "pump_phase_rad", p.pump_phase);
    return p;
}

JisConfig jis_from(const json& j) {
    JisConfig c = j.value("preset", std::string("default")) == "device" ? device_preset() : default_config();
    if (j.contains("rho")) c.jpc1.rho = c.jpc2.rho = j.at("rho").get<double>();
    c.alpha = num(j, "alpha", c.alpha);
    c.f_p = num(j, "f_p_GHz", c.f_p);
    if (j.contains("delay")) {
        c.delay.length_um = num(j.at("delay"), "length_um", c.delay.length_um);
        c.delay.eps_eff = num(j.at("delay"), "eps_eff", c.delay.eps_eff);
    }
    c.hybrid_imbalance = num(j, "hybrid_imbalance_rad", c.hybrid_imbalance);
    set_pump_port(c, pump_port_from(j.value("pump_port", std::string("P1"))));
    const char* names[] = {"jpc1", "jpc2"};
    JpcParams* stages[] = {&c.jpc1, &c.jpc2};
    for (int k = 0; k < 2; ++k) {
        const json s = j.contains(names[k]) ? j.at(names[k]) : json::object();
        *stages[k] = stage_from(s, *stages[k]);
        if (!s.contains("f_b_GHz")) stages[k]->f_b = stages[k]->f_a + c.f_p;
    }
    try {
        validate(c);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("/jis: ") + e.what());
    }
    return c;
}

JrmParams jrm_from(const json& j) {
    JrmParams r;
    r.I0 = num(j, "I0_uA", r.I0);
    r.f_max = num(j, "f_max_GHz", r.f_max);
    r.Z_res = num(j, "Z_res_ohm", r.Z_res);
    r.LJ0_over_L = num(j, "LJ0_over_L", r.LJ0_over_L);
    r.LJ0_over_Ls = num(j, "LJ0_over_Ls", r.LJ0_over_Ls);
    return r;
}

std::vector<double> grid_from(const json& j) {
    const double lo = j.at("start_GHz").get<double>();
    const double hi = j.at("stop_GHz").get<double>();
    if (!(hi > lo)) throw ConfigError("/grid: stop_GHz must exceed start_GHz");
    return linear_grid(lo, hi, j.at("points").get<int>());
}

ReadoutChainRecord record_from(const json& j) {
    ReadoutChainRecord r;
    r.label = j.at("label").get<std::string>();
    r.T1 = j.at("T1_us").get<double>();
    r.T2E = j.at("T2E_us").get<double>();
    r.kappa = j.at("kappa_MHz").get<double>();
    r.chi = j.at("chi_MHz").get<double>();
    r.n_m = num(j, "n_m", 0.0);
    r.T_m = num(j, "T_m_us", 0.0);
    if (j.contains("I_over_sigma")) r.I_over_sigma = j.at("I_over_sigma").get<double>();
    return r;
}

}  // namespace paramix::config
