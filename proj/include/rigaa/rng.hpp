// rng.hpp — seeded random stream with platform-independent output.
//
// Every stochastic operation in the workbench takes an explicit Rng handle;
// nothing reads global state. The generator is xoshiro256** seeded through
// splitmix64, and all distributions are implemented here so that a given
// seed produces the same stream on every platform and standard library.
#ifndef RIGAA_RNG_HPP_
#define RIGAA_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace rigaa {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [lo, hi], both inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(next());
    return lo + static_cast<int>((wide * range) >> 64);
  }

  std::size_t uniform_index(std::size_t n) {
    const auto wide = static_cast<unsigned __int128>(next());
    return static_cast<std::size_t>((wide * n) >> 64);
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; second draw cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(6.283185307179586476925287 * u2);
    has_spare_ = true;
    return mag * std::cos(6.283185307179586476925287 * u2);
  }

  // Independent child stream; distinct `stream` values give distinct streams.
  Rng split(std::uint64_t stream) {
    std::uint64_t x = next() ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return Rng(splitmix64(x));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rigaa

#endif  // RIGAA_RNG_HPP_
