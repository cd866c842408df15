#pragma once

#include <cstdint>

namespace synthcat {

// PCG32 with an explicit (seed, stream id) identity. Distinct stream ids pick
// distinct LCG increments, so chains, replicates, and per-record draws get
// independent sequences by construction instead of by ad hoc seed juggling.
// Same (seed, stream id) reproduces the identical sequence bit for bit.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    state_ = 0u;
    inc_ = (stream_id << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1. Bounded rejection keeps it unbiased.
  std::uint32_t next_below(std::uint32_t n) {
    std::uint32_t threshold = (-n) % n;
    for (;;) {
      std::uint32_t r = next_u32();
      if (r >= threshold) return r % n;
    }
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derived stream, independent of this one and of other offsets. Depends
  // only on the construction identity (seed, stream id, offset), never on
  // how much of this stream has been consumed.
  RngStream substream(std::uint64_t offset) const {
    return RngStream(seed_, mix(stream_id_, offset));
  }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over a two-word combine
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  std::uint64_t inc_;
};

// Top-level stream id layout: (domain << 48) | (block << 24) | unit.
// Domains keep the chain, synthesis, bounds, and simulation draws disjoint;
// blocks index replicates or scenarios; units index iterations. Per-record
// streams are derived below these via RngStream::substream.
namespace stream_domain {
constexpr std::uint64_t chain = 1;
constexpr std::uint64_t synthesis = 2;
constexpr std::uint64_t bounds = 3;
constexpr std::uint64_t simulate = 4;
}  // namespace stream_domain

constexpr std::uint64_t make_stream_id(std::uint64_t domain, std::uint64_t block,
                                       std::uint64_t unit) {
  return (domain << 48) | ((block & 0xffffffULL) << 24) | (unit & 0xffffffULL);
}

}  // namespace synthcat
