#pragma once

#include <limits>
#include <vector>

namespace slmc {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  bool valid() const noexcept;
};

struct GaussianParams {
  double mu = 0.0;
  double sigma2 = 1.0;
};

struct DirichletParams {
  std::vector<double> alpha;
};

/// First two moments of a distribution on [0,1].
struct MomentPair {
  double mu = 0.0;
  double sigma2 = 0.0;

  /// True when some Beta distribution has exactly these moments.
  bool beta_feasible() const noexcept;
};

/// Returned by beta_density at a divergent endpoint (alpha < 1 at 0, beta < 1 at 1).
inline constexpr double kBoundaryPole = std::numeric_limits<double>::infinity();

/// Lanczos log-gamma for x > 0.
double log_gamma(double x);
double log_beta_function(double a, double b);

double beta_density(const BetaParams& p, double z);
double gaussian_density(const GaussianParams& p, double z);

MomentPair beta_moments(const BetaParams& p);

/// Mean and variance of X*Y for independent X, Y.
MomentPair product_moments_analytic(const MomentPair& x, const MomentPair& y);

/// Beta with the given mean and variance. Throws kInfeasibleMoments unless
/// 0 < mu < 1 and 0 < sigma2 < mu(1-mu).
BetaParams beta_from_moments(const MomentPair& m);

/// Throws kNonPositiveVariance when sigma2 <= 0.
GaussianParams gaussian_from_moments(const MomentPair& m);

/// Exact density of the product of two independent Uniform(0,1) variables: -ln z.
/// Throws kDomain for z <= 0.
double limit_case_density(double z);

}  // namespace slmc
