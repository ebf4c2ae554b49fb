#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace paramix::io {

// "%.9g" with no locale dependence; infinities print as inf / -inf.
std::string num(double v);
// Value rounded to 9 significant digits, for JSON emission.
double round9(double v);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    // Optional leading text column; header[0] names it when present.
    std::vector<std::string> labels;
};
void write_csv(std::ostream& os, const Csv& csv);
void write_csv(const std::string& path, const Csv& csv);

struct Touchstone {
    int ports = 2;
    std::vector<double> f_GHz;
    std::vector<Eigen::MatrixXcd> s;  // s[k](out, in)
    std::vector<std::string> comments;
};

// Version 1.1 text, "# GHz S RI R 50". Two-port records are one line in the
// order S11 S21 S12 S22; larger networks write one matrix row per line.
void write_touchstone(std::ostream& os, const Touchstone& t);
void write_touchstone(const std::string& path, const Touchstone& t);
// Reads what write_touchstone emits (RI/MA/DB, Hz..GHz). `ports` must be given.
Touchstone read_touchstone(std::istream& is, int ports);
Touchstone read_touchstone(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace paramix::io
