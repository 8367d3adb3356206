#include "slmc/random.hpp"

#include <cmath>

namespace slmc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::Block Philox4x32::encrypt(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
  if (index_ == 4) {
    buffer_ = encrypt(counter_, key_);
    // The low 64 bits count blocks; 2^64 blocks per stream is never reached.
    if (++counter_[0] == 0) ++counter_[1];
    index_ = 0;
  }
  return buffer_[index_++];
}

RngSeed RngSeed::derive(std::uint64_t tag) const noexcept {
  return {splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull)), tag};
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t hi = engine_();
  return (hi << 32) | engine_();
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() noexcept {
  // Midpoints of the 2^53 grid never hit 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept {
  for (;;) {
    const double x = 2.0 * uniform() - 1.0;
    const double y = 2.0 * uniform() - 1.0;
    const double r2 = x * x + y * y;
    if (r2 > 0.0 && r2 < 1.0) {
      return x * std::sqrt(-2.0 * std::log(r2) / r2);
    }
  }
}

double Rng::exponential() noexcept { return -std::log(uniform_open()); }

double Rng::gamma(double shape) noexcept {
  if (shape < 1.0) {
    // Gamma(k) = Gamma(k + 1) * U^(1/k), done in log space so tiny shapes
    // do not underflow before the caller's ratio.
    const double g = gamma(shape + 1.0);
    return g * std::exp(std::log(uniform_open()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double alpha, double beta) noexcept {
  const double x = gamma(alpha);
  const double y = gamma(beta);
  const double s = x + y;
  if (s > 0.0) {
    return x / s;
  }
  // Both Gamma draws underflowed (only possible for very small shapes): the
  // draw sits at an endpoint, chosen with probability alpha / (alpha + beta).
  return uniform() < alpha / (alpha + beta) ? 1.0 : 0.0;
}

}  // namespace slmc
