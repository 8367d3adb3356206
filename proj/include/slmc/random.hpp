#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace slmc {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key selects the seed; the upper half of the 128-bit counter selects
/// the stream and the lower half counts blocks, so every (seed, stream) pair is an
/// independent, reproducible sequence that can be produced on any worker.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Ten-round bijection; exposed for known-answer tests.
  static Block encrypt(Block counter, Key key) noexcept;

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  unsigned index_ = 4;
};

/// Seed plus stream index for derived substreams.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Independent child seed, deterministic in (seed, stream, tag).
  RngSeed derive(std::uint64_t tag) const noexcept;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Variate generation on top of Philox. Value type; copying forks the state.
class Rng {
 public:
  explicit Rng(RngSeed seed) noexcept : engine_(seed.seed, seed.stream) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;
  double exponential() noexcept;
  /// Gamma(shape, 1): Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
  double gamma(double shape) noexcept;
  /// Beta(alpha, beta) as a ratio of Gamma draws.
  double beta(double alpha, double beta) noexcept;

 private:
  Philox4x32 engine_;
};

}  // namespace slmc
