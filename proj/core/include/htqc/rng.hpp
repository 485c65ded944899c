#pragma once

#include <cstdint>

namespace htqc {

// Counter-based random stream. Each (seed, stream, substream) triple opens an
// independent stream whose output depends only on those values and the draw
// index, so per-trial streams are reproducible for any worker count.
//
// The generator is the splitmix64 output function applied to a running
// counter offset by a hash of the stream identifiers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
        : base_(mix(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ stream) ^ substream)),
          counter_(0) {}

    std::uint64_t next_u64() { return mix(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform double in [0, 1) with 53 bits of mantissa.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n); n must be small relative to 2^64.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t counter_;
};

}  // namespace htqc
