#pragma once

#include <cstdint>

namespace gstree {

// SplitMix64 step; used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of an independent substream from (seed, stream_id).
// Replica r of a Monte Carlo run draws from substream_seed(run_seed, r).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream_id * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9e3779b97f4a7c15ULL);
}

// xoshiro256++ (Blackman & Vigna). State seeded through SplitMix64.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) w = splitmix64(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Standard normal sampler: xoshiro256++ driving a 128-layer ziggurat
// (Marsaglia-Tsang). One uint64 per sample on the fast path.  Frozen:
// identical seeds give identical streams on a given platform, which the
// bit-exact oracle tests rely on.
class GaussianGen {
 public:
  explicit GaussianGen(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    const std::uint32_t u = static_cast<std::uint32_t>(rng_.next());
    const std::int32_t hz = static_cast<std::int32_t>(u);
    const unsigned iz = u & 127u;
    if (static_cast<std::uint32_t>(hz < 0 ? -hz : hz) < kn(iz))
      return hz * wn(iz);
    return fix(hz, iz);
  }

  Xoshiro256pp& raw() { return rng_; }

 private:
  double fix(std::int32_t hz, unsigned iz);
  static std::uint32_t kn(unsigned i);
  static double wn(unsigned i);
  static double fn(unsigned i);
  Xoshiro256pp rng_;
};

}  // namespace gstree
