#include "paramix/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "paramix/constants.hpp"
#include "paramix/error.hpp"

namespace paramix::io {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round9(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    return std::strtod(num(v).c_str(), nullptr);
}

void write_csv(std::ostream& os, const Csv& csv) {
    for (std::size_t k = 0; k < csv.header.size(); ++k) os << (k ? "," : "") << csv.header[k];
    os << '\n';
    const bool labelled = !csv.labels.empty();
    if (labelled && csv.labels.size() != csv.rows.size()) throw Error("CSV label count does not match rows");
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row.size() + labelled != csv.header.size()) throw Error("CSV row width does not match header");
        if (labelled) os << csv.labels[r];
        for (std::size_t k = 0; k < row.size(); ++k) os << (k || labelled ? "," : "") << num(row[k]);
        os << '\n';
    }
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    return f;
}

}  // namespace

void write_csv(const std::string& path, const Csv& csv) {
    auto f = open_out(path);
    write_csv(f, csv);
}

void write_touchstone(std::ostream& os, const Touchstone& t) {
    if (t.ports < 1 || t.f_GHz.size() != t.s.size()) throw Error("inconsistent Touchstone data");
    os << "! Touchstone 1.1\n";
    for (const auto& c : t.comments) os << "! " << c << '\n';
    os << "# GHz S RI R 50\n";
    auto pair = [&](const cplx& z) { os << ' ' << num(z.real()) << ' ' << num(z.imag()); };
    for (std::size_t k = 0; k < t.s.size(); ++k) {
        const auto& m = t.s[k];
        if (m.rows() != t.ports || m.cols() != t.ports) throw Error("Touchstone matrix has the wrong size");
        os << num(t.f_GHz[k]);
        if (t.ports == 1) {
            pair(m(0, 0));
        } else if (t.ports == 2) {
            pair(m(0, 0));
            pair(m(1, 0));
            pair(m(0, 1));
            pair(m(1, 1));
        } else {
            for (int r = 0; r < t.ports; ++r) {
                if (r) os << '\n';
                for (int c = 0; c < t.ports; ++c) pair(m(r, c));
            }
        }
        os << '\n';
    }
}

void write_touchstone(const std::string& path, const Touchstone& t) {
    auto f = open_out(path);
    write_touchstone(f, t);
}

Touchstone read_touchstone(std::istream& is, int ports) {
    if (ports < 1) throw Error("Touchstone port count must be >= 1");
    Touchstone t;
    t.ports = ports;
    double f_scale = 1.0;  // to GHz
    std::string format = "MA";
    bool seen_option = false;
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        if (const auto bang = line.find('!'); bang != std::string::npos) {
            if (bang == 0 && line.size() > 2) t.comments.push_back(line.substr(2));
            line.resize(bang);
        }
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok[0] == '#') {
            if (seen_option) continue;
            seen_option = true;
            std::string rest = tok.substr(1);
            std::vector<std::string> opts;
            if (!rest.empty()) opts.push_back(rest);
            while (ls >> tok) opts.push_back(tok);
            for (auto& o : opts)
                for (auto& ch : o) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            for (std::size_t k = 0; k < opts.size(); ++k) {
                const auto& o = opts[k];
                if (o == "HZ") f_scale = 1e-9;
                else if (o == "KHZ") f_scale = 1e-6;
                else if (o == "MHZ") f_scale = 1e-3;
                else if (o == "GHZ") f_scale = 1.0;
                else if (o == "RI" || o == "MA" || o == "DB") format = o;
                else if (o == "S") continue;
                else if (o == "R") ++k;
                else throw Error("unsupported Touchstone option '" + o + "'");
            }
            continue;
        }
        do {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0') throw Error("bad Touchstone number '" + tok + "'");
            values.push_back(v);
        } while (ls >> tok);
    }
    const std::size_t per = 1 + 2 * static_cast<std::size_t>(ports) * ports;
    if (values.size() % per != 0) throw Error("Touchstone data is truncated");
    auto make = [&](double a, double b) -> cplx {
        if (format == "RI") return {a, b};
        const double deg = b * kPi / 180.0;
        const double mag = format == "DB" ? std::pow(10.0, a / 20.0) : a;
        return std::polar(mag, deg);
    };
    for (std::size_t off = 0; off < values.size(); off += per) {
        t.f_GHz.push_back(values[off] * f_scale);
        Eigen::MatrixXcd m(ports, ports);
        const double* v = values.data() + off + 1;
        if (ports == 2) {
            m(0, 0) = make(v[0], v[1]);
            m(1, 0) = make(v[2], v[3]);
            m(0, 1) = make(v[4], v[5]);
            m(1, 1) = make(v[6], v[7]);
        } else {
            for (int r = 0; r < ports; ++r)
                for (int c = 0; c < ports; ++c) {
                    const std::size_t k = 2 * (static_cast<std::size_t>(r) * ports + c);
                    m(r, c) = make(v[k], v[k + 1]);
                }
        }
        t.s.push_back(m);
    }
    return t;
}

Touchstone read_touchstone(const std::string& path) {
    const auto dot = path.rfind(".s");
    if (dot == std::string::npos || path.back() != 'p') throw Error("Touchstone file name must end in .sNp");
    const int ports = std::atoi(path.substr(dot + 2, path.size() - dot - 3).c_str());
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    return read_touchstone(f, ports);
}

void write_text(const std::string& path, const std::string& text) {
    auto f = open_out(path);
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace paramix::io
