#include "bodyflow/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace bodyflow {

namespace {
std::atomic<int> g_threads{1};
}

void set_worker_threads(int n) { g_threads.store(std::max(1, n)); }

int worker_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int nw = std::min<std::size_t>(g_threads.load(), n);
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t chunk = std::max<std::size_t>(1, n / (8 * nw));
    auto work = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + chunk);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw - 1);
    for (int t = 0; t < nw - 1; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace bodyflow
