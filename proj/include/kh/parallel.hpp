#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace kh {

// Run fn(k) for k in [0, jobs) on up to `threads` workers (0 = hardware).
// Exceptions propagate from the first failing job.
inline void run_parallel(int64_t jobs, const std::function<void(int64_t)>& fn, int threads = 0) {
    if (jobs <= 0) return;
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    if (hw > jobs) hw = static_cast<unsigned>(jobs);
    if (hw == 1) {
        for (int64_t k = 0; k < jobs; ++k) fn(k);
        return;
    }
    std::atomic<int64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < hw; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int64_t k = next.fetch_add(1);
                if (k >= jobs) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mtx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace kh
