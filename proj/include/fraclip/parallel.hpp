#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace fraclip {

/// Deterministic parallel map: `body(i)` must write only to slot i of some
/// preallocated output; reductions stay sequential at the call site, so the
/// result is identical for any thread count.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const unsigned k = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (unsigned t = 0; t < k; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace fraclip
