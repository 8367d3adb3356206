#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slmc/monte_carlo.hpp"

namespace slmc {

inline constexpr double kDefaultEpsClamp = 1e-9;

/// Gaussian KDE fitted in logit space and mapped back to [0,1] with the logit Jacobian.
///
/// Immutable after fitting. Logit samples are kept sorted so each query only sums
/// kernels within kKernelCutoff bandwidths; the dropped tail weighs less than 1e-15
/// of one kernel's peak, so results agree with the full sum to rounding.
class KdeModel {
 public:
  static constexpr double kKernelCutoff = 8.5;

  KdeModel(std::vector<double> logit_samples, double bandwidth, double eps_clamp);

  std::span<const double> logit_samples() const noexcept { return logit_samples_; }
  double bandwidth() const noexcept { return bandwidth_; }
  std::size_t n() const noexcept { return logit_samples_.size(); }
  double eps_clamp() const noexcept { return eps_clamp_; }

  /// Density of the logit-space estimate at t (no Jacobian).
  double logit_density(double t) const noexcept;

 private:
  std::vector<double> logit_samples_;
  double bandwidth_;
  double eps_clamp_;
};

double logit(double x) noexcept;

/// Sample standard deviation with divisor n - 1.
double empirical_std(std::span<const double> values);

/// 1.06 * sigma_hat * n^(-1/5).
double silverman_bandwidth(double sigma_hat, std::size_t n);

/// Clamp to [eps, 1 - eps], take logits, Silverman bandwidth from the logit spread.
/// Throws kDegenerateVariance when all logit samples coincide.
KdeModel fit_logit_kde(const SampleBatch& batch, double eps_clamp = kDefaultEpsClamp);
KdeModel fit_logit_kde(std::span<const double> values, double eps_clamp = kDefaultEpsClamp);

double kde_density(const KdeModel& model, double z);

/// Evaluates many query points; queries are processed in independent blocks.
std::vector<double> kde_density(const KdeModel& model, std::span<const double> zs);

/// Order of magnitude of the KDE bias on [0,1]: (0.1 * n^(-1/5))^2.
double kde_bias_bound(std::size_t n);

}  // namespace slmc
