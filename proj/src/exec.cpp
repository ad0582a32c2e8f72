#include "umrn/exec.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace umrn {

namespace {
unsigned g_workers = 0;
}

void set_worker_count(unsigned workers) { g_workers = workers; }

unsigned worker_count() {
    if (g_workers > 0) return g_workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::uint64_t n, const std::function<void(std::uint64_t)>& f) {
    const unsigned workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&]() {
        // chunked self-scheduling; chunk size keeps contention low
        const std::uint64_t chunk = std::max<std::uint64_t>(1, n / (workers * 16));
        for (;;) {
            std::uint64_t start = next.fetch_add(chunk);
            if (start >= n) return;
            std::uint64_t end = std::min(n, start + chunk);
            try {
                for (std::uint64_t i = start; i < end; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned w = 1; w < workers; ++w) threads.emplace_back(run);
    run();
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace umrn
