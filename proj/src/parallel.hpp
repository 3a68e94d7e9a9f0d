#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qlogic::detail {

// Runs fn(begin, end, chunk) over `count` items split into contiguous chunks.
// Chunk c always covers the same index range for a given (count, jobs), so
// callers that merge per-chunk results in chunk order get deterministic output.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned jobs, Fn&& fn) {
    std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, count));
    if (n <= 1) {
        fn(std::size_t{0}, count, std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n);
    std::size_t step = (count + n - 1) / n;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t b = std::min(count, c * step), e = std::min(count, b + step);
        pool.emplace_back([&, b, e, c] {
            try {
                fn(b, e, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::size_t chunk_count(std::size_t count, unsigned jobs) {
    return std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, count));
}

}  // namespace qlogic::detail
