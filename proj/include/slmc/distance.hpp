#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slmc/kde.hpp"
#include "slmc/monte_carlo.hpp"

namespace slmc {

/// A density on (0,1) behind a uniform interface.
struct DensityEvaluator {
  std::function<double(double)> eval;
  std::string label;
  /// Optional vectorised form; must agree with `eval` pointwise.
  std::function<std::vector<double>(std::span<const double>)> eval_many;

  std::vector<double> evaluate(std::span<const double> zs) const;
};

DensityEvaluator beta_evaluator(const BetaParams& p, std::string label);
DensityEvaluator gaussian_evaluator(const GaussianParams& p, std::string label);
DensityEvaluator kde_evaluator(KdeModel model, std::string label);
DensityEvaluator limit_case_evaluator(std::string label = "exact");

enum class IntegrationMode {
  kSampled,  // m uniform draws on (eps, 1 - eps)
  kGrid,     // m midpoints of a regular grid on [eps, 1 - eps]; diagnostic only
};

struct IntegrationOptions {
  IntegrationMode mode = IntegrationMode::kSampled;
  double eps_clamp = kDefaultEpsClamp;
};

inline constexpr std::size_t kDefaultIntegrationPoints = 1000;

/// Integration points used by the distance estimators for (m, seed, options).
std::vector<double> integration_points(std::size_t m, RngSeed seed,
                                       const IntegrationOptions& opts = {});

/// Mean of |p_i - q_i| over shared integration points and its standard error.
EstimatorResult distance_from_values(std::span<const double> p, std::span<const double> q);

/// Monte Carlo estimate of the integral of |p - q| over [0,1].
EstimatorResult integral_distance(const DensityEvaluator& p, const DensityEvaluator& q,
                                  std::size_t m, RngSeed seed,
                                  const IntegrationOptions& opts = {});

/// Half the integral distance; the standard error is halved too.
EstimatorResult total_variation(const DensityEvaluator& p, const DensityEvaluator& q,
                                std::size_t m, RngSeed seed,
                                const IntegrationOptions& opts = {});

/// Distances from one reference to several densities on a shared point set.
/// Element i equals integral_distance(reference, others[i], m, seed, opts); the
/// reference is evaluated once.
std::vector<EstimatorResult> integral_distances(const DensityEvaluator& reference,
                                                std::span<const DensityEvaluator> others,
                                                std::size_t m, RngSeed seed,
                                                const IntegrationOptions& opts = {});

}  // namespace slmc
