#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ising_ais {

/// Per-path random stream.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// converts to doubles by hand so the stream is identical across standard
/// library implementations. Streams are keyed by (seed, stream index) through
/// std::seed_seq, so path k of an ensemble never depends on how many other
/// paths ran before it or on which thread.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
    engine_.seed(seq);
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p (p outside [0,1] is clamped by construction).
  bool bernoulli(double p) { return uniform() < p; }

  /// Integer form of bernoulli(p): `bits() < threshold(p)` is the same event
  /// as `uniform() < p` for the same draw.
  static std::uint64_t threshold(double p) {
    if (!(p > 0.0)) return 0;
    if (p >= 1.0) return std::uint64_t{1} << 53;
    return static_cast<std::uint64_t>(std::ceil(p * 0x1.0p53));
  }
  std::uint64_t bits() { return engine_() >> 11; }

  /// Uniform integer on [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ising_ais
