#pragma once

#include <cstdint>
#include <random>

namespace cyclestar {

// Deterministic uniform source. std::mt19937_64 has a fully specified output
// sequence; the conversions below avoid the implementation-defined standard
// distributions so the same seed gives the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Lemire multiply-shift.
  std::uint64_t below(std::uint64_t n) {
    const auto wide = static_cast<unsigned __int128>(gen_()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Stream splitter for deriving independent per-task seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cyclestar
