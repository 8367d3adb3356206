#include "slmc/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slmc/error.hpp"

namespace slmc {

namespace {

// g = 7, n = 9 Lanczos coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

bool BetaParams::valid() const noexcept {
  return std::isfinite(alpha) && std::isfinite(beta) && alpha > 0.0 && beta > 0.0;
}

bool MomentPair::beta_feasible() const noexcept {
  return mu > 0.0 && mu < 1.0 && sigma2 > 0.0 && sigma2 < mu * (1.0 - mu);
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw Error(ErrorCode::kDomain, "log_gamma requires x > 0");
  }
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  double series = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    series += kLanczosCoef[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(series);
}

double log_beta_function(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_density(const BetaParams& p, double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    return 0.0;
  }
  const double a1 = p.alpha - 1.0;
  const double b1 = p.beta - 1.0;
  if (z == 0.0) {
    if (a1 < 0.0) return kBoundaryPole;
    if (a1 > 0.0) return 0.0;
  }
  if (z == 1.0) {
    if (b1 < 0.0) return kBoundaryPole;
    if (b1 > 0.0) return 0.0;
  }
  // 0 * log(0) terms vanish when the exponent is exactly zero.
  const double lz = a1 == 0.0 ? 0.0 : a1 * std::log(z);
  const double l1z = b1 == 0.0 ? 0.0 : b1 * std::log1p(-z);
  return std::exp(lz + l1z - log_beta_function(p.alpha, p.beta));
}

double gaussian_density(const GaussianParams& p, double z) {
  const double d = z - p.mu;
  return std::exp(-0.5 * d * d / p.sigma2) / std::sqrt(2.0 * std::numbers::pi * p.sigma2);
}

MomentPair beta_moments(const BetaParams& p) {
  const double s = p.alpha + p.beta;
  return {p.alpha / s, p.alpha * p.beta / (s * s * (s + 1.0))};
}

MomentPair product_moments_analytic(const MomentPair& x, const MomentPair& y) {
  return {x.mu * y.mu,
          x.mu * x.mu * y.sigma2 + y.mu * y.mu * x.sigma2 + x.sigma2 * y.sigma2};
}

BetaParams beta_from_moments(const MomentPair& m) {
  if (!m.beta_feasible()) {
    std::ostringstream msg;
    msg << "no Beta distribution has mean " << m.mu << " and variance " << m.sigma2;
    throw Error(ErrorCode::kInfeasibleMoments, msg.str());
  }
  const double common = (m.sigma2 + m.mu * m.mu - m.mu) / m.sigma2;
  return {-m.mu * common, (m.mu - 1.0) * common};
}

GaussianParams gaussian_from_moments(const MomentPair& m) {
  if (!(m.sigma2 > 0.0)) {
    throw Error(ErrorCode::kNonPositiveVariance, "Gaussian variance must be positive");
  }
  return {m.mu, m.sigma2};
}

double limit_case_density(double z) {
  if (!(z > 0.0)) {
    throw Error(ErrorCode::kDomain, "limit-case density is defined on (0, 1]");
  }
  return z >= 1.0 ? 0.0 : -std::log(z);
}

}  // namespace slmc
