// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random number generation for reproducible Monte Carlo.
//
// CounterRng is a keyed SplitMix64 stream: output(i) = splitmix64_mix(key + i*GAMMA).
// Because the state is (key, counter) the generator supports cheap stream
// splitting: substream(s) derives an independent key, so trial t / link l can
// each own their own stream without coordinating draw counts. All draws are
// pure integer arithmetic plus libm calls, so a given (seed, substream path,
// draw index) always yields the same value on the same platform.
//
// Complex Gaussians come from the polar Box-Muller form on (0,1] uniforms:
// z = sqrt(-ln u1) * exp(j*2*pi*u2), which is CN(0,1) (unit total variance).

#ifndef FDBIA_RNG_HPP
#define FDBIA_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace fdbia {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed)
      : key_(detail::splitmix64_mix(seed + detail::kGamma)) {}

  /// Derives an independent stream. Distinct substream paths from the same
  /// root give unrelated sequences; the parent stream is left untouched.
  [[nodiscard]] CounterRng substream(std::uint64_t stream) const {
    CounterRng child(0);
    child.key_ = detail::splitmix64_mix(
        key_ ^ detail::splitmix64_mix(stream * detail::kGamma + 0x632BE59BD9B4E019ULL));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() {
    const std::uint64_t v = key_ + (++counter_) * detail::kGamma;
    return detail::splitmix64_mix(v);
  }

  /// Uniform on (0, 1]; never returns 0 so log() below is safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> next_cn() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fdbia

#endif  // FDBIA_RNG_HPP
