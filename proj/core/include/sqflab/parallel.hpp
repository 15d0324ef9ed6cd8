#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace sqflab {

// Worker count used when an operation is asked for "default" parallelism:
// --threads / set_thread_budget() if set, else SQFLAB_THREADS, else
// hardware concurrency.
int thread_budget();
void set_thread_budget(int n); // n <= 0 restores the default

// Runs fn(chunk_index, begin, end) over [begin, end) split into chunks of at
// most `chunk` elements. Chunks are claimed dynamically but are identified by
// index, so callers that write into per-chunk slots get schedule-independent
// results. threads == 0 means thread_budget().
template <class Fn>
void for_chunks(uint64_t begin, uint64_t end, uint64_t chunk, int threads, Fn&& fn) {
    if (end <= begin) return;
    if (chunk == 0) chunk = 1;
    uint64_t n = end - begin;
    uint64_t nchunks = (n + chunk - 1) / chunk;
    if (threads <= 0) threads = thread_budget();
    // oversubscribing CPU-bound chunk work only adds switching cost
    unsigned hw = std::thread::hardware_concurrency();
    if (hw && static_cast<unsigned>(threads) > hw) threads = static_cast<int>(hw);
    uint64_t nthreads = static_cast<uint64_t>(threads);
    if (nthreads > nchunks) nthreads = nchunks;

    if (nthreads <= 1) {
        for (uint64_t c = 0; c < nchunks; ++c) {
            uint64_t lo = begin + c * chunk;
            uint64_t hi = lo + chunk < end ? lo + chunk : end;
            fn(c, lo, hi);
        }
        return;
    }

    std::atomic<uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) return;
            uint64_t lo = begin + c * chunk;
            uint64_t hi = lo + chunk < end ? lo + chunk : end;
            fn(c, lo, hi);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (uint64_t t = 1; t < nthreads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

} // namespace sqflab
