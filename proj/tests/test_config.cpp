#include <filesystem>
#include <sstream>

#include "paramix/commands.hpp"
#include "paramix/config.hpp"
#include "paramix/error.hpp"
#include "paramix/io.hpp"
#include "support.hpp"

using namespace paramix;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
    try {
        config::parse(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("paramix-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_text(const std::string& text, const fs::path& out, const std::string& format = "csv") {
    RunOptions opt;
    opt.out_dir = out.string();
    opt.format = format;
    std::ostringstream log;
    return run_command(config::parse(text), opt, log);
}

}  // namespace

TEST_CASE("schema accepts a minimal configuration") {
    const auto d = config::parse(R"({"schema": "paramix/1", "command": "selftest"})");
    CHECK(d.value.at("command") == "selftest");
}

TEST_CASE("schema errors carry line numbers and pointers") {
    const std::string text = "{\n  \"schema\": \"paramix/1\",\n  \"command\": \"jis-sweep\",\n  \"jis\": {\n"
                             "    \"rho\": 1.5,\n    \"gamma\": 3\n  }\n}\n";
    const std::string e = error_of(text);
    CHECK(e.find("cfg.json:5: /jis/rho:") != std::string::npos);
    CHECK(e.find("cfg.json:6: /jis/gamma: unknown key") != std::string::npos);
}

TEST_CASE("schema rejects unknown commands, versions and missing keys") {
    CHECK(error_of(R"({"schema": "paramix/2", "command": "selftest"})").find("/schema") != std::string::npos);
    CHECK(error_of(R"({"schema": "paramix/1", "command": "plot"})").find("/command") != std::string::npos);
    CHECK(error_of(R"({"schema": "paramix/1", "command": "fit"})").find("measured") != std::string::npos);
    CHECK(error_of(R"({"schema": "paramix/1", "command": "selftest", "extra": 1})").find("/extra") !=
          std::string::npos);
    CHECK(error_of("{\"schema\": \"paramix/1\",\n\"command\": }").find("cfg.json:2: invalid JSON") !=
          std::string::npos);
}

TEST_CASE("each issue is reported once") {
    const std::string e = error_of(R"({"schema": "paramix/9", "command": "selftest"})");
    CHECK(e.find("/schema") == e.rfind("/schema"));
}

TEST_CASE("semantic errors are located too") {
    const std::string text = "{\n\"schema\": \"paramix/1\",\n\"command\": \"jis-sweep\",\n\"jis\": {},\n"
                             "\"grid\": {\"start_GHz\": 7, \"stop_GHz\": 6, \"points\": 10}\n}";
    try {
        run_text(text, scratch("semantic"));
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":5: /grid") != std::string::npos);
    }
}

TEST_CASE("configuration conversion") {
    const auto d = config::parse(R"({"schema": "paramix/1", "command": "jis-sweep",
        "jis": {"preset": "device", "rho": 0.3, "pump_port": "P2", "jpc2": {"phi_ext_rad": 3.0}}})");
    const JisConfig c = config::jis_from(d.value.at("jis"));
    CHECK(c.alpha == 0.51);
    CHECK(c.jpc1.rho == 0.3);
    CHECK(c.pump_port == PumpPort::P2);
    CHECK(c.jpc2.phi_ext == 3.0);
    CHECK(c.jpc1.f_b == doctest::Approx(c.jpc1.f_a + c.f_p));
    CHECK(config::pump_port_name(PumpPort::P1) == "P1");
    CHECK_THROWS_AS(config::parity_from("both"), ConfigError);
}

TEST_CASE("emitted sidecars validate against the schema") {
    const fs::path out = scratch("sidecars");
    CHECK(run_text(R"({"schema": "paramix/1", "command": "jis-sweep", "jis": {"preset": "device"}})", out) == 0);
    CHECK(run_text(R"({"schema": "paramix/1", "command": "fit", "measured": {"S21_dB": -2, "S12_dB": -23}})", out) == 0);
    CHECK(run_text(R"({"schema": "paramix/1", "command": "parity", "enumerate": {"max_n": 2}})", out) == 0);
    CHECK(run_text(R"({"schema": "paramix/1", "command": "readout", "records": [
        {"label": "a", "T1_us": 60, "T2E_us": 54, "kappa_MHz": 1.1, "chi_MHz": 0.94}]})", out) == 0);
    CHECK(run_text(R"({"schema": "paramix/1", "command": "bandwidth-scan", "rho_list": [0.3, 0.4]})", out) == 0);
    CHECK(run_text(R"({"schema": "paramix/1", "command": "jis-4port", "jis": {}})", out, "json") == 0);
    const std::pair<const char*, const char*> files[] = {
        {"jis-sweep.summary.json", "jis_sweep_summary"}, {"fit.json", "fit_result"},
        {"parity.json", "parity_table"},                 {"readout.json", "readout_report"},
        {"bandwidth-scan.json", "bandwidth_scan_report"}, {"jis-4port.json", "four_port_report"}};
    for (const auto& [file, def] : files) {
        const auto doc = config::json::parse(io::read_text((out / file).string()));
        CHECK_MESSAGE(config::check(doc, def).empty(), file);
    }
    // A single readout row has no isolation estimate.
    CHECK_FALSE(config::json::parse(io::read_text((out / "readout.json").string())).contains("isolation_dB"));
    fs::remove_all(out);
}

TEST_CASE("command behaviour") {
    const fs::path out = scratch("commands");
    CHECK(run_text(R"({"schema": "paramix/1", "command": "jpc-sweep", "jpc": {"rho": 1.0},
        "grid": {"start_GHz": 6.83, "stop_GHz": 6.85, "points": 3}})", out) == 0);
    const std::string csv = io::read_text((out / "jpc-sweep.csv").string());
    CHECK(csv.find("f_GHz,t_sq,r_a_sq,t_arg_rad\n") == 0);
    CHECK(csv.find("\n6.84,1,0,") != std::string::npos);

    CHECK(run_text(R"({"schema": "paramix/1", "command": "jis-sweep", "jis": {"rho": 0},
        "grid": {"start_GHz": 6.8, "stop_GHz": 6.9, "points": 5}})", out, "touchstone") == 0);
    const io::Touchstone t = io::read_touchstone((out / "jis-sweep.s2p").string());
    for (const auto& m : t.s) CHECK(std::abs(std::abs(m(1, 0)) - 1.0) < 1e-8);

    CHECK(run_text(R"({"schema": "paramix/1", "command": "parity", "chains": [{"parities": ["odd"]}]})", out) == 0);
    CHECK_THROWS_AS(run_text(R"({"schema": "paramix/1", "command": "fit",
        "measured": {"S21_sq": 0.5}})", out), ConfigError);
    CHECK_THROWS_AS(run_text(R"({"schema": "paramix/1", "command": "parity",
        "chains": [{"parities": ["odd"]}]})", out, "touchstone"), ConfigError);
    fs::remove_all(out);
}
