#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "doctest.h"
#include "paramix/network.hpp"

namespace paramix::test {

inline double max_abs(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
public:
    EnvGuard(const char* key, const char* value) : key_(key) {
        if (const char* old = std::getenv(key)) {
            had_ = true;
            old_ = old;
        }
        if (value)
            ::setenv(key, value, 1);
        else
            ::unsetenv(key);
    }
    ~EnvGuard() {
        if (had_)
            ::setenv(key_.c_str(), old_.c_str(), 1);
        else
            ::unsetenv(key_.c_str());
    }
    EnvGuard(const EnvGuard&) = delete;
    EnvGuard& operator=(const EnvGuard&) = delete;

private:
    std::string key_;
    std::string old_;
    bool had_ = false;
};

}  // namespace paramix::test
