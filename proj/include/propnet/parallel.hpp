#ifndef PROPNET_PARALLEL_HPP
#define PROPNET_PARALLEL_HPP

#include <atomic>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace propnet {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs `run(worker_state, b)` for b in [0, nblocks) on a pool and feeds the
// results to `merge(b, result)` in strict block order. Results therefore do
// not depend on the number of workers; blocks are the unit of determinism.
// Out-of-order results are buffered, with backpressure so memory stays
// bounded by O(threads) blocks.
template <class MakeWorker, class RunBlock, class MergeBlock>
void ordered_parallel_blocks(long nblocks, int threads, MakeWorker make_worker, RunBlock run,
                             MergeBlock merge) {
    using Result = decltype(run(std::declval<decltype(make_worker())&>(), long{0}));
    threads = resolve_threads(threads);
    if (nblocks <= 0) return;

    if (threads <= 1 || nblocks == 1) {
        auto state = make_worker();
        for (long b = 0; b < nblocks; ++b) merge(b, run(state, b));
        return;
    }

    std::atomic<long> next{0};
    std::mutex mu;
    std::condition_variable cv;
    std::map<long, Result> ready;
    long merged = 0;
    std::exception_ptr error;
    const std::size_t buffer_cap = static_cast<std::size_t>(4 * threads);

    auto worker = [&]() {
        auto state = make_worker();
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= nblocks) return;
            Result r;
            try {
                r = run(state, b);
            } catch (...) {
                std::lock_guard lk(mu);
                if (!error) error = std::current_exception();
                cv.notify_all();
                return;
            }
            std::unique_lock lk(mu);
            cv.wait(lk, [&] { return error || b == merged || ready.size() < buffer_cap; });
            if (error) return;
            ready.emplace(b, std::move(r));
            while (!ready.empty() && ready.begin()->first == merged) {
                merge(merged, std::move(ready.begin()->second));
                ready.erase(ready.begin());
                ++merged;
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace propnet

#endif
