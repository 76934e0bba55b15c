#ifndef MORPHIN_RNG_HPP
#define MORPHIN_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace morphin {

// splitmix64 finalizer; used for seeding and for deriving per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** generator. The sequence is fully specified by the 64-bit
// seed, independent of platform and standard library, which keeps trial
// results reproducible across machines. All distribution sampling below
// is hand-rolled for the same reason (std:: distributions are
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
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

  // Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0,n), unbiased via rejection.
  int uniform_below(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_below: n must be positive");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return static_cast<int>(r % bound);
    }
  }

  // Poisson sample by CDF inversion. Intended for the small rates used by
  // the traffic simulation; cost is O(lambda).
  int poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("Rng::poisson: lambda must be >= 0");
    if (lambda == 0.0) return 0;
    const double u = uniform01();
    double p = std::exp(-lambda);
    double cdf = p;
    int k = 0;
    while (u >= cdf && k < 10000) {
      ++k;
      p *= lambda / k;
      cdf += p;
    }
    return k;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

// Stable seed derivation for independent per-trial streams:
// seed = chain of splitmix64 steps over (base_seed, trial, agent, stream).
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial_index,
                                 std::uint64_t agent_tag, std::uint64_t stream_tag) {
  std::uint64_t s = base_seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (trial_index + 0x9e3779b97f4a7c15ULL);
  h = splitmix64(s);
  s = h ^ (agent_tag + 0xbf58476d1ce4e5b9ULL);
  h = splitmix64(s);
  s = h ^ (stream_tag + 0x94d049bb133111ebULL);
  return splitmix64(s);
}

}  // namespace morphin

#endif  // MORPHIN_RNG_HPP
