#include "credinfo/parallel.hpp"

#include <cmath>

namespace credinfo {

std::mt19937_64 block_engine(std::uint64_t seed, Stream stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double RatioAccumulator::std_error() const {
    if (n < 2.0 || sw <= 0.0) return 0.0;
    const double r = mean();
    const double mw = sw / n;
    // sample variance of the linearized residual w*(v - r)
    const double s2 = (swvwv - 2.0 * r * swwv + r * r * sww) / n;
    const double var = std::max(0.0, s2) * n / (n - 1.0);
    return std::sqrt(var / n) / mw;
}

RatioAccumulator reduce_pairwise(std::span<const RatioAccumulator> blocks) {
    if (blocks.empty()) return {};
    if (blocks.size() == 1) return blocks.front();
    const std::size_t half = blocks.size() / 2;
    RatioAccumulator left = reduce_pairwise(blocks.first(half));
    left.merge(reduce_pairwise(blocks.subspan(half)));
    return left;
}

}  // namespace credinfo
