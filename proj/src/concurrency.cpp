// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/concurrency.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace femtoslice {

int worker_count() {
    if (const char* env = std::getenv("FEMTOSLICE_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            // fall through to the hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    // Workers stop at their first exception; afterwards the one with the
    // smallest index is rethrown, so failures do not depend on scheduling.
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([begin, end, w, &fn, &errors, &error_index] {
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    std::size_t first = n;
    std::exception_ptr to_throw;
    for (std::size_t w = 0; w < workers; ++w) {
        if (errors[w] && error_index[w] < first) {
            first = error_index[w];
            to_throw = errors[w];
        }
    }
    if (to_throw) std::rethrow_exception(to_throw);
}

} // namespace femtoslice
