#include <sstream>

#include "paramix/error.hpp"
#include "paramix/io.hpp"
#include "support.hpp"

using namespace paramix;

TEST_CASE("number formatting") {
    CHECK(io::num(0.0) == "0");
    CHECK(io::num(1.0) == "1");
    CHECK(io::num(-0.5) == "-0.5");
    CHECK(io::num(1.0 / 3.0) == "0.333333333");
    CHECK(io::num(6.02214076e23) == "6.02214076e+23");
    CHECK(io::num(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(io::num(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::round9(1.0 / 3.0) == 0.333333333);
}

TEST_CASE("csv layout") {
    io::Csv c{{"f_GHz", "S21_dB"}, {{6.84, -0.5}, {6.85, -std::numeric_limits<double>::infinity()}}, {}};
    std::ostringstream os;
    io::write_csv(os, c);
    CHECK(os.str() == "f_GHz,S21_dB\n6.84,-0.5\n6.85,-inf\n");
    io::Csv l{{"label", "x"}, {{1.0}, {2.0}}, {"a", "b"}};
    std::ostringstream ls;
    io::write_csv(ls, l);
    CHECK(ls.str() == "label,x\na,1\nb,2\n");
}

TEST_CASE("touchstone two-port round trip") {
    io::Touchstone t;
    t.ports = 2;
    t.comments = {"two-port test"};
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        t.f_GHz.push_back(6.8 + 0.01 * k);
        Eigen::MatrixXcd m(2, 2);
        for (int i = 0; i < 4; ++i) m(i % 2, i / 2) = cplx(u(rng), u(rng));
        t.s.push_back(m);
    }
    std::ostringstream os;
    io::write_touchstone(os, t);
    const std::string text = os.str();
    CHECK(text.find("! Touchstone 1.1") == 0);
    CHECK(text.find("# GHz S RI R 50\n") != std::string::npos);
    std::istringstream is(text);
    const io::Touchstone back = io::read_touchstone(is, 2);
    REQUIRE(back.f_GHz.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(back.f_GHz[k] == doctest::Approx(t.f_GHz[k]).epsilon(1e-12));
        CHECK(test::max_abs(back.s[k], t.s[k]) < 1e-8);
    }
    // Record order on the data line is S11 S21 S12 S22.
    std::istringstream first(text.substr(text.find("# GHz")));
    std::string opt_line, data;
    std::getline(first, opt_line);
    std::getline(first, data);
    std::istringstream fields(data);
    double f, re11, im11, re21, im21;
    fields >> f >> re11 >> im11 >> re21 >> im21;
    CHECK(re21 == doctest::Approx(t.s[0](1, 0).real()).epsilon(1e-8));
}

TEST_CASE("touchstone four-port round trip") {
    io::Touchstone t;
    t.ports = 4;
    Eigen::MatrixXcd m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = cplx(0.1 * i - 0.05 * j, 0.02 * (i + 1) * (j - 2));
    t.f_GHz = {6.84};
    t.s = {m};
    std::ostringstream os;
    io::write_touchstone(os, t);
    std::istringstream is(os.str());
    const io::Touchstone back = io::read_touchstone(is, 4);
    REQUIRE(back.s.size() == 1);
    CHECK(test::max_abs(back.s[0], m) < 1e-9);
}

TEST_CASE("touchstone formats and units") {
    std::istringstream ma("# MHz S MA R 50\n6840 0.5 90 0.25 180 1 0 0.5 -90\n");
    const io::Touchstone a = io::read_touchstone(ma, 2);
    CHECK(a.f_GHz[0] == doctest::Approx(6.84));
    CHECK(std::abs(a.s[0](0, 0) - cplx(0.0, 0.5)) < 1e-12);
    CHECK(std::abs(a.s[0](1, 0) - cplx(-0.25, 0.0)) < 1e-12);
    CHECK(std::abs(a.s[0](0, 1) - cplx(1.0, 0.0)) < 1e-12);
    std::istringstream db("! comment\n# Hz S DB R 50\n6.84e9 -20 0 0 0 0 0 -20 0\n");
    const io::Touchstone d = io::read_touchstone(db, 2);
    CHECK(std::abs(d.s[0](0, 0) - 0.1) < 1e-12);
    CHECK(std::abs(d.s[0](1, 0) - 1.0) < 1e-12);
    std::istringstream bad("# GHz S RI R 50\n6.84 1 0 0\n");
    CHECK_THROWS(io::read_touchstone(bad, 2));
}
