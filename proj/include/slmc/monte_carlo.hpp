#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slmc/distributions.hpp"
#include "slmc/opinion.hpp"
#include "slmc/random.hpp"

namespace slmc {

/// Draws on [0,1] together with a description of how they were produced.
struct SampleBatch {
  std::vector<double> values;
  std::string provenance;
  /// Degenerate fusion pairs replaced by fresh draws.
  std::size_t resampled = 0;

  std::size_t n() const noexcept { return values.size(); }
};

struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

SampleBatch sample_beta(const BetaParams& p, std::size_t n, RngSeed seed);

/// (b, d, u) uniform on the simplex via Dirichlet(1,1,1); a ~ U(0,1).
BinomialOpinion sample_random_opinion(RngSeed seed);

/// alpha, beta independent and uniform on (0, 10].
BetaParams sample_random_beta_params(RngSeed seed);

SampleBatch push_product_samples(const SampleBatch& x, const SampleBatch& y);

/// Supplies a fresh (x, y) pair when a fusion pair is degenerate.
using PairResampler = std::function<std::pair<double, double>()>;

/// Elementwise xy / (xy + (1-x)(1-y)). Pairs whose denominator is below 1e-300
/// are redrawn through `resample`; without a resampler they raise kDegenerateSample.
SampleBatch push_fusion_samples(const SampleBatch& x, const SampleBatch& y,
                                const PairResampler& resample = {});

/// The fusion map for a single pair; NaN when the denominator is degenerate.
double fusion_map(double x, double y) noexcept;

/// Mean of f over the values and its standard error (sample std / sqrt(n)).
EstimatorResult mc_estimate(std::span<const double> values,
                            const std::function<double(double)>& f);
EstimatorResult mc_estimate(const SampleBatch& batch, const std::function<double(double)>& f);

/// Sample mean and unbiased sample variance.
MomentPair estimate_moments(std::span<const double> values);
MomentPair estimate_moments(const SampleBatch& batch);

}  // namespace slmc
