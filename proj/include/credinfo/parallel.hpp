#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace credinfo {

/// Paths are grouped in fixed-size blocks; every block owns an RNG stream
/// derived from (seed, stream, block index) only, so results do not depend on
/// how blocks are distributed over workers.
inline constexpr std::size_t kPathsPerBlock = 1024;

/// Stream identifiers keep independent random quantities apart for one seed.
enum class Stream : std::uint64_t {
    FirmPaths = 1,
    Barrier = 2,
    Noise = 3,
    Oracle = 4,
    InsiderQ = 5,
    Signal = 6,
};

std::mt19937_64 block_engine(std::uint64_t seed, Stream stream, std::uint64_t block);

/// Resolves 0 to the hardware concurrency (at least 1).
unsigned resolve_workers(unsigned workers);

/// Runs body(block, first, last) for every block of [0, n_items) on up to
/// `workers` threads.  Blocks are independent; the body must only write to
/// per-block or per-item storage.
template <class Body>
void for_each_block(std::size_t n_items, unsigned workers, Body&& body);

/// Sum of a span by pairwise (tree) reduction; the order of operations depends
/// only on the length.
double pairwise_sum(std::span<const double> values);

/// Running sums for a ratio estimator sum(w*v)/sum(w).  Merging is exact
/// addition, so block results can be combined in a fixed tree order.
struct RatioAccumulator {
    double n = 0.0;
    double sw = 0.0;
    double swv = 0.0;
    double sww = 0.0;
    double swvwv = 0.0;
    double swwv = 0.0;

    void add(double w, double v) {
        const double wv = w * v;
        n += 1.0;
        sw += w;
        swv += wv;
        sww += w * w;
        swvwv += wv * wv;
        swwv += w * wv;
    }
    void merge(const RatioAccumulator& o) {
        n += o.n;
        sw += o.sw;
        swv += o.swv;
        sww += o.sww;
        swvwv += o.swvwv;
        swwv += o.swwv;
    }
    /// Ratio estimate; 0 when no weight was accumulated.
    double mean() const { return sw > 0.0 ? swv / sw : 0.0; }
    /// Delta-method standard error of the ratio.
    double std_error() const;
};

/// Combines per-block accumulators pairwise in index order.
RatioAccumulator reduce_pairwise(std::span<const RatioAccumulator> blocks);

}  // namespace credinfo

#include "credinfo/parallel_impl.hpp"
