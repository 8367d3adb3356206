#include "slmc/distance.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include "slmc/error.hpp"

namespace slmc {

EstimatorResult distance_from_values(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kLengthMismatch, "density vectors differ in length");
  }
  if (p.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "integration needs at least two points");
  }
  const std::size_t m = p.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += std::abs(p[i] - q[i]);
  const double n = static_cast<double>(m);
  const double mean = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double g = std::abs(p[i] - q[i]) - mean;
    ss += g * g;
  }
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n), m};
}

std::vector<double> DensityEvaluator::evaluate(std::span<const double> zs) const {
  if (eval_many) {
    return eval_many(zs);
  }
  std::vector<double> out(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) out[i] = eval(zs[i]);
  return out;
}

DensityEvaluator beta_evaluator(const BetaParams& p, std::string label) {
  return {[p](double z) { return beta_density(p, z); }, std::move(label), {}};
}

DensityEvaluator gaussian_evaluator(const GaussianParams& p, std::string label) {
  return {[p](double z) { return gaussian_density(p, z); }, std::move(label), {}};
}

DensityEvaluator kde_evaluator(KdeModel model, std::string label) {
  auto shared = std::make_shared<const KdeModel>(std::move(model));
  return {[shared](double z) { return kde_density(*shared, z); }, std::move(label),
          [shared](std::span<const double> zs) { return kde_density(*shared, zs); }};
}

DensityEvaluator limit_case_evaluator(std::string label) {
  return {[](double z) { return limit_case_density(z); }, std::move(label), {}};
}

std::vector<double> integration_points(std::size_t m, RngSeed seed,
                                       const IntegrationOptions& opts) {
  if (m < 2) {
    throw Error(ErrorCode::kInvalidConfig, "integration needs at least two points");
  }
  const double lo = opts.eps_clamp;
  const double span = 1.0 - 2.0 * opts.eps_clamp;
  std::vector<double> pts(m);
  if (opts.mode == IntegrationMode::kGrid) {
    for (std::size_t i = 0; i < m; ++i) {
      pts[i] = lo + span * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    }
    return pts;
  }
  Rng rng(seed);
  for (auto& p : pts) p = lo + span * rng.uniform_open();
  return pts;
}

EstimatorResult integral_distance(const DensityEvaluator& p, const DensityEvaluator& q,
                                  std::size_t m, RngSeed seed, const IntegrationOptions& opts) {
  const auto pts = integration_points(m, seed, opts);
  return distance_from_values(p.evaluate(pts), q.evaluate(pts));
}

EstimatorResult total_variation(const DensityEvaluator& p, const DensityEvaluator& q,
                                std::size_t m, RngSeed seed, const IntegrationOptions& opts) {
  auto r = integral_distance(p, q, m, seed, opts);
  r.value *= 0.5;
  r.std_error *= 0.5;
  return r;
}

std::vector<EstimatorResult> integral_distances(const DensityEvaluator& reference,
                                                std::span<const DensityEvaluator> others,
                                                std::size_t m, RngSeed seed,
                                                const IntegrationOptions& opts) {
  const auto pts = integration_points(m, seed, opts);
  const auto ref = reference.evaluate(pts);
  std::vector<EstimatorResult> out;
  out.reserve(others.size());
  for (const auto& q : others) {
    out.push_back(distance_from_values(ref, q.evaluate(pts)));
  }
  return out;
}

}  // namespace slmc
