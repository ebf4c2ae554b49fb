#include "paramix/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "paramix/error.hpp"

namespace paramix {

unsigned worker_count() {
    const char* env = std::getenv("PARAMIX_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw ConfigError(std::string("PARAMIX_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
}

void parallel_for(std::size_t n, std::size_t align, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    if (align == 0) align = 1;
    const std::size_t workers = worker_count();
    const std::size_t blocks = (n + align - 1) / align;
    const std::size_t used = std::min<std::size_t>(workers, blocks);
    if (used <= 1) {
        body(0, n);
        return;
    }
    const std::size_t per = (blocks + used - 1) / used * align;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(used);
    for (std::size_t w = 0; w < used; ++w) {
        const std::size_t b = w * per;
        const std::size_t e = std::min(n, b + per);
        if (b >= e) break;
        pool.emplace_back([&, w, b, e] {
            try {
                body(b, e);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace paramix
