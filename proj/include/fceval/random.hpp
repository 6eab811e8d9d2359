#pragma once

#include <cstdint>
#include <random>

namespace fceval {

/// Single-owner source of pseudo-random variates.
///
/// A stream is identified by (master seed, substream index). The pair is
/// expanded through std::seed_seq into the state of a 64-bit Mersenne
/// Twister, so neighbouring indices yield unrelated sequences. Monte Carlo
/// code derives one substream per replication (or per Brownian path), which
/// makes every result independent of how work is split across threads.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed, std::uint64_t substream = 0);

    /// Standard normal variate.
    double normal() { return normal_(engine_); }
    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t substream() const noexcept { return index_; }

private:
    std::uint64_t master_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fceval
