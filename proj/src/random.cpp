#include "fceval/random.hpp"

namespace fceval {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t master, std::uint64_t index) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(master), hi(master), lo(index), hi(index), 0x6a09e667u};
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t substream)
    : master_(master_seed), index_(substream), engine_(seeded_engine(master_seed, substream)) {}

}  // namespace fceval
