#pragma once

#include "satfarey/core_fractions.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace satfarey::detail {

/// Splits [lo, hi) into contiguous chunks, runs work(chunk_lo, chunk_hi) on
/// up to `threads` threads and returns the results in chunk order, so the
/// output never depends on the thread count.
template <class Result, class Work>
std::vector<Result> parallel_chunks(Int lo, Int hi, unsigned threads, Work&& work)
{
    const Int n = std::max<Int>(0, hi - lo);
    const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<Int>(1, n))));
    if (t == 1) {
        std::vector<Result> out;
        out.push_back(work(lo, hi));
        return out;
    }
    // More chunks than threads: late denominators cost more than early ones.
    const Int chunks = static_cast<Int>(t) * 4;
    std::vector<Result> out(static_cast<std::size_t>(chunks));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
    auto bound = [&](Int c) { return lo + n * c / chunks; };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            for (Int c = w; c < chunks; c += t) {
                try {
                    out[static_cast<std::size_t>(c)] = work(bound(c), bound(c + 1));
                } catch (...) {
                    errors[static_cast<std::size_t>(c)] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

}  // namespace satfarey::detail
