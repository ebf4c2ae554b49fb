#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "paramix/config.hpp"

namespace paramix {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitCheck = 4 };

struct RunOptions {
    std::string out_dir = ".";
    std::string format = "csv";  // csv | json | touchstone
};

// Runs one command on a validated document and writes its files under
// out_dir. Progress lines go to `log`. Returns the process exit code;
// configuration and numerical failures are thrown.
int run_command(const config::Document& doc, const RunOptions& opt, std::ostream& log);

// selftest without a configuration file.
int run_selftest(const std::vector<int>& criteria, std::ostream& log);

}  // namespace paramix
