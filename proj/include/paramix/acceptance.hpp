#pragma once

#include <string>
#include <vector>

namespace paramix::acceptance {

struct Result {
    int id = 0;
    bool pass = false;
    std::string title;
    std::string detail;  // no timings, so reruns print identical text
};

inline constexpr int kCount = 12;

Result run(int id);
std::vector<Result> run_all(const std::vector<int>& ids);
std::string format(const Result& r);

}  // namespace paramix::acceptance
