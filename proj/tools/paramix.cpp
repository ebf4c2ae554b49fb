#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paramix/commands.hpp"
#include "paramix/config.hpp"
#include "paramix/error.hpp"

namespace {

const std::vector<std::string> kCommands{"jpc-sweep", "jis-sweep", "jis-4port",      "fit",     "parity",
                                         "readout",   "flux-curve", "bandwidth-scan", "selftest"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Josephson parametric mixer and isolator network simulator"};
    app.require_subcommand(1, 1);

    std::string config_path;
    paramix::RunOptions opt;
    std::vector<int> criteria;
    for (const std::string& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        auto* cfg = sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--format", opt.format, "csv, json or touchstone")
            ->check(CLI::IsMember({"csv", "json", "touchstone"}))
            ->capture_default_str();
        if (name == "selftest")
            sub->add_option("--criterion", criteria, "run only these criteria (repeatable)")
                ->check(CLI::Range(1, 12));
        else
            cfg->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : paramix::kExitConfig;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (config_path.empty()) return paramix::run_selftest(criteria, std::cout);
        const paramix::config::Document doc = paramix::config::load(config_path);
        const std::string declared = doc.value.at("command").get<std::string>();
        if (declared != cmd)
            throw paramix::ConfigError(config_path + ": command is '" + declared + "' but '" + cmd + "' was requested");
        if (cmd == "selftest" && !criteria.empty()) return paramix::run_selftest(criteria, std::cout);
        return paramix::run_command(doc, opt, std::cout);
    } catch (const paramix::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return paramix::kExitConfig;
    } catch (const paramix::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return paramix::kExitNumerical;
    } catch (const paramix::DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return paramix::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return paramix::kExitNumerical;
    }
}
