#include "macflow/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace macflow {

namespace {
thread_local bool in_parallel_region = false;
} // namespace

int worker_threads() {
    static const int cached = [] {
        if (const char* env = std::getenv("MACFLOW_THREADS")) {
            try {
                int n = std::stoi(env);
                if (n >= 1) return n;
            } catch (...) {
            }
        }
        unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? static_cast<int>(hc) : 1;
    }();
    return cached;
}

void parallel_for(int n, const std::function<void(int, int)>& fn) {
    if (n <= 0) return;
    const int workers = worker_threads();
    if (workers == 1 || n <= 8192 || in_parallel_region) {
        fn(0, n);
        return;
    }
    const int nthreads = std::min(workers, (n + 8191) / 8192);
    const int chunk = (n + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        const int b = t * chunk;
        const int e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] {
            in_parallel_region = true;
            fn(b, e);
            in_parallel_region = false;
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace macflow
