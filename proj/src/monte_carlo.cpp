#include "slmc/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slmc/error.hpp"

namespace slmc {

namespace {

constexpr double kFusionGuard = 1e-300;

void require_same_length(const SampleBatch& x, const SampleBatch& y) {
  if (x.n() != y.n()) {
    std::ostringstream msg;
    msg << "sample batches differ in length (" << x.n() << " vs " << y.n() << ")";
    throw Error(ErrorCode::kLengthMismatch, msg.str());
  }
}

void require_two(std::size_t n) {
  if (n < 2) {
    throw Error(ErrorCode::kEmptyInput, "need at least two samples");
  }
}

}  // namespace

SampleBatch sample_beta(const BetaParams& p, std::size_t n, RngSeed seed) {
  if (!p.valid()) {
    throw Error(ErrorCode::kOutOfRange, "invalid Beta parameters");
  }
  Rng rng(seed);
  SampleBatch out;
  out.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values.push_back(rng.beta(p.alpha, p.beta));
  }
  std::ostringstream prov;
  prov.precision(17);
  prov << "beta(" << p.alpha << "," << p.beta << ") seed=" << seed.seed << "/" << seed.stream;
  out.provenance = prov.str();
  return out;
}

BinomialOpinion sample_random_opinion(RngSeed seed) {
  Rng rng(seed);
  const double e0 = rng.exponential();
  const double e1 = rng.exponential();
  const double e2 = rng.exponential();
  const double s = e0 + e1 + e2;
  return {e0 / s, e1 / s, e2 / s, rng.uniform()};
}

BetaParams sample_random_beta_params(RngSeed seed) {
  Rng rng(seed);
  // 1 - U lies in (0, 1], so exact zeros never occur.
  const double alpha = 10.0 * (1.0 - rng.uniform());
  const double beta = 10.0 * (1.0 - rng.uniform());
  return {alpha, beta};
}

SampleBatch push_product_samples(const SampleBatch& x, const SampleBatch& y) {
  require_same_length(x, y);
  SampleBatch out;
  out.values.resize(x.n());
  for (std::size_t i = 0; i < x.n(); ++i) {
    out.values[i] = x.values[i] * y.values[i];
  }
  out.provenance = "product[" + x.provenance + " ; " + y.provenance + "]";
  return out;
}

double fusion_map(double x, double y) noexcept {
  const double xy = x * y;
  const double den = xy + (1.0 - x) * (1.0 - y);
  if (!(den > kFusionGuard)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return xy / den;
}

SampleBatch push_fusion_samples(const SampleBatch& x, const SampleBatch& y,
                                const PairResampler& resample) {
  require_same_length(x, y);
  SampleBatch out;
  out.values.resize(x.n());
  for (std::size_t i = 0; i < x.n(); ++i) {
    double z = fusion_map(x.values[i], y.values[i]);
    while (std::isnan(z)) {
      if (!resample) {
        std::ostringstream msg;
        msg << "degenerate fusion pair (" << x.values[i] << ", " << y.values[i] << ") at index "
            << i;
        throw Error(ErrorCode::kDegenerateSample, msg.str());
      }
      const auto [xr, yr] = resample();
      z = fusion_map(xr, yr);
      ++out.resampled;
    }
    out.values[i] = z;
  }
  std::ostringstream prov;
  prov << "fusion[" << x.provenance << " ; " << y.provenance << "] resampled=" << out.resampled;
  out.provenance = prov.str();
  return out;
}

EstimatorResult mc_estimate(std::span<const double> values,
                            const std::function<double(double)>& f) {
  require_two(values.size());
  std::vector<double> fx(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    fx[i] = f(values[i]);
    sum += fx[i];
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : fx) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n), values.size()};
}

EstimatorResult mc_estimate(const SampleBatch& batch, const std::function<double(double)>& f) {
  return mc_estimate(std::span<const double>(batch.values), f);
}

MomentPair estimate_moments(std::span<const double> values) {
  require_two(values.size());
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi || !(var > 0.0)) {
    throw Error(ErrorCode::kDegenerateVariance, "all samples are identical");
  }
  return {mean, var};
}

MomentPair estimate_moments(const SampleBatch& batch) {
  return estimate_moments(std::span<const double>(batch.values));
}

}  // namespace slmc
