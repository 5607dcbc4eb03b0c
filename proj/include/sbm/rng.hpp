#pragma once

#include <cstdint>

namespace sbm {

// xoshiro256++ with splitmix64 seeding. Distribution helpers are implemented
// here rather than through <random> so that streams are bit-reproducible
// across standard libraries. substream(seed, k) yields streams safe to use in
// parallel: the 256-bit states of distinct (seed, k) pairs are scattered by
// the seeding mix, so replicate-level parallelism never shares a sequence.
class Rng {
  public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream);
    static Rng substream(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream); }

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1); never returns an endpoint, so logs
    // of the output are always finite.
    double next_unit();

    // Standard normal via Box-Muller; consumes two uniforms per pair and
    // caches the second deviate.
    double next_normal();

    // Exact Binomial(n, q) by CDF inversion; splits n recursively when the
    // mean is large so the walk stays short and the probabilities stay inside
    // the normal double range.
    long long next_binomial(long long n, double q);

    // Uniform integer in [0, bound); multiply-shift, bias below bound/2^64.
    std::uint64_t next_below(std::uint64_t bound);

  private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace sbm
