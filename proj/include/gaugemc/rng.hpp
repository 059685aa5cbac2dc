// Deterministic random-number primitives.
//
// Two pieces, both fixed by the file-format contract (see docs/determinism.md
// for test vectors):
//
//  * derive_key: a stateless splitmix64-based hash chain used for hierarchical
//    seeding.  Every random decision in the code is keyed by an explicit path
//    (master_seed, sample_index, purpose tag, ...), so any single value can be
//    recomputed independently of iteration order or thread count.
//
//  * Xoshiro256pp: xoshiro256++ (Blackman & Vigna), used for the sequential
//    per-replica Monte Carlo streams.  State is four 64-bit words and is
//    serialized verbatim into checkpoints.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace gaugemc::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 output function (finalizer).
constexpr std::uint64_t sm_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One link of the key-derivation chain: absorb one path component.
constexpr std::uint64_t key_chain(std::uint64_t h, std::uint64_t v) {
  return sm_mix((h ^ v) + kGolden);
}

// Hash an explicit seeding path into a 64-bit stream key (chain from h = 0).
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = 0;
  for (std::uint64_t v : path) h = key_chain(h, v);
  return h;
}

// Map 64 random bits to a double in [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Purpose tags separating the RNG sub-streams of one disorder sample.
enum StreamTag : std::uint64_t {
  kTagTau = 1,    // quenched disorder signs
  kTagSweep = 2,  // per-temperature-slot Metropolis stream
  kTagSwap = 3,   // replica-exchange decisions
};

// splitmix64 sequence generator; used to expand a key into xoshiro state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
  constexpr std::uint64_t next() {
    state_ += kGolden;
    return sm_mix(state_);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256pp {
 public:
  Xoshiro256pp() : Xoshiro256pp(0) {}
  explicit Xoshiro256pp(std::uint64_t key) {
    SplitMix64 sm(key);
    for (auto& w : s_) w = sm.next();
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

  double u01() { return to_unit(next()); }

  // Uniform integer in [0, n) by rejection-free scaling (n << 2^64 here, the
  // modulo bias is irrelevant only if n divides; use Lemire reduction).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  std::array<std::uint64_t, 4> state() const { return s_; }
  void set_state(const std::array<std::uint64_t, 4>& s) { s_ = s; }

  friend bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace gaugemc::rng
