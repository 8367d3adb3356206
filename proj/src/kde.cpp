#include "slmc/kde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "slmc/error.hpp"

namespace slmc {

KdeModel::KdeModel(std::vector<double> logit_samples, double bandwidth, double eps_clamp)
    : logit_samples_(std::move(logit_samples)), bandwidth_(bandwidth), eps_clamp_(eps_clamp) {
  if (logit_samples_.empty() || !(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw Error(ErrorCode::kDegenerateVariance, "KDE needs samples and a positive bandwidth");
  }
  std::sort(logit_samples_.begin(), logit_samples_.end());
}

double KdeModel::logit_density(double t) const noexcept {
  const double reach = kKernelCutoff * bandwidth_;
  const auto lo = std::lower_bound(logit_samples_.begin(), logit_samples_.end(), t - reach);
  const auto hi = std::upper_bound(lo, logit_samples_.end(), t + reach);
  const double inv_w = 1.0 / bandwidth_;
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double r = (t - *it) * inv_w;
    sum += std::exp(-0.5 * r * r);
  }
  return sum * inv_w / (static_cast<double>(logit_samples_.size()) *
                        std::sqrt(2.0 * std::numbers::pi));
}

double logit(double x) noexcept { return std::log(x / (1.0 - x)); }

double empirical_std(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kEmptyInput, "empirical_std needs at least two values");
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

double silverman_bandwidth(double sigma_hat, std::size_t n) {
  return 1.06 * sigma_hat * std::pow(static_cast<double>(n), -0.2);
}

KdeModel fit_logit_kde(std::span<const double> values, double eps_clamp) {
  if (!(eps_clamp > 0.0 && eps_clamp < 0.5)) {
    throw Error(ErrorCode::kOutOfRange, "eps_clamp must lie in (0, 0.5)");
  }
  if (values.size() < 2) {
    throw Error(ErrorCode::kEmptyInput, "KDE needs at least two samples");
  }
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    t[i] = logit(std::clamp(values[i], eps_clamp, 1.0 - eps_clamp));
  }
  const double sigma = empirical_std(t);
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kDegenerateVariance, "logit samples have zero spread");
  }
  const double w = silverman_bandwidth(sigma, t.size());
  return KdeModel(std::move(t), w, eps_clamp);
}

KdeModel fit_logit_kde(const SampleBatch& batch, double eps_clamp) {
  return fit_logit_kde(std::span<const double>(batch.values), eps_clamp);
}

double kde_density(const KdeModel& model, double z) {
  const double eps = model.eps_clamp();
  const double zc = std::clamp(z, eps, 1.0 - eps);
  return model.logit_density(logit(zc)) / (zc * (1.0 - zc));
}

std::vector<double> kde_density(const KdeModel& model, std::span<const double> zs) {
  constexpr std::size_t kBlock = 256;
  std::vector<double> out(zs.size());
  const std::size_t blocks = (zs.size() + kBlock - 1) / kBlock;
  auto run_block = [&](std::size_t b) {
    const std::size_t stop = std::min(zs.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < stop; ++i) {
      out[i] = kde_density(model, zs[i]);
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(blocks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1 || zs.size() * model.n() < (1u << 22)) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }
  return out;
}

double kde_bias_bound(std::size_t n) {
  const double w = 0.1 * std::pow(static_cast<double>(n), -0.2);
  return w * w;
}

}  // namespace slmc
