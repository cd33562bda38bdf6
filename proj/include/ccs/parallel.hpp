// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ccs::detail {

/// Runs body(worker, lo, hi) over [first, last] in blocks of `block` values.
/// Blocks are handed out dynamically, so callers must merge per-worker
/// results in an order-independent way. The first exception thrown by any
/// worker is rethrown on the calling thread.
template <class Body>
void parallel_blocks(std::uint64_t first, std::uint64_t last, std::uint64_t block, unsigned workers, Body&& body)
{
    if (first > last) {
        return;
    }
    workers = std::max(1u, workers);
    block = std::max<std::uint64_t>(1, block);
    if (workers == 1) {
        for (std::uint64_t lo = first; lo <= last;) {
            const std::uint64_t hi = std::min(last, lo + (block - 1));
            body(0u, lo, hi);
            if (hi == last) {
                break;
            }
            lo = hi + 1;
        }
        return;
    }

    const std::uint64_t nblocks = (last - first) / block + 1;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (;;) {
                        const std::uint64_t k = next.fetch_add(1, std::memory_order_relaxed);
                        if (k >= nblocks) {
                            return;
                        }
                        const std::uint64_t lo = first + k * block;
                        const std::uint64_t hi = std::min(last, lo + (block - 1));
                        body(w, lo, hi);
                    }
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next.store(nblocks);
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace ccs::detail
