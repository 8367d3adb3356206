#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slmc/distributions.hpp"
#include "slmc/error.hpp"
#include "slmc/random.hpp"

using namespace slmc;

namespace {

double midpoint_integral(const BetaParams& p, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += beta_density(p, (i + 0.5) / n);
  return sum / n;
}

}  // namespace

TEST_CASE("log_gamma agrees with std::lgamma on (0, 200]") {
  for (int i = 1; i <= 4000; ++i) {
    const double x = 0.05 * i;
    CHECK(std::abs(log_gamma(x) - std::lgamma(x)) <= 1e-10 * std::max(1.0, std::abs(std::lgamma(x))));
  }
  for (double x : {1e-6, 1e-3, 0.01, 0.3, 0.49999}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("log_gamma closed forms and domain") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  CHECK(std::abs(log_gamma(1.0)) < 1e-14);
  CHECK(std::abs(log_gamma(2.0)) < 1e-14);
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), Error);
  CHECK_THROWS_AS(log_gamma(-1.0), Error);
}

TEST_CASE("beta densities integrate to one") {
  Rng rng(RngSeed{7, 0});
  for (int k = 0; k < 100; ++k) {
    const BetaParams p{rng.uniform(1.0, 10.0), rng.uniform(1.0, 10.0)};
    CHECK(midpoint_integral(p, 20000) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("beta density point values") {
  CHECK(beta_density({1, 1}, 0.3) == doctest::Approx(1.0));
  CHECK(beta_density({2, 2}, 0.5) == doctest::Approx(1.5));
  // Beta(2,3): 12 z (1-z)^2
  CHECK(beta_density({2, 3}, 0.2) == doctest::Approx(12 * 0.2 * 0.64));
  CHECK(beta_density({2, 2}, 0.0) == 0.0);
  CHECK(beta_density({1, 1}, 0.0) == doctest::Approx(1.0));
  CHECK(beta_density({0.5, 2}, 0.0) == kBoundaryPole);
  CHECK(beta_density({2, 0.5}, 1.0) == kBoundaryPole);
  CHECK(beta_density({2, 2}, 1.5) == 0.0);
  CHECK(beta_density({2, 2}, -0.1) == 0.0);
}

TEST_CASE("gaussian density") {
  CHECK(gaussian_density({0.0, 1.0}, 0.0) == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi)));
  CHECK(gaussian_density({0.5, 0.04}, 0.7) ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2 * std::numbers::pi * 0.04)));
}

TEST_CASE("beta moments and analytic product moments") {
  const auto mx = beta_moments({2, 3});
  const auto my = beta_moments({4, 1});
  CHECK(mx.mu == doctest::Approx(0.4));
  CHECK(mx.sigma2 == doctest::Approx(0.04));
  CHECK(my.mu == doctest::Approx(0.8));
  CHECK(my.sigma2 == doctest::Approx(4.0 / 150.0));
  const auto z = product_moments_analytic(mx, my);
  // E[XY] and E[X^2]E[Y^2] - E[XY]^2 for independent factors
  CHECK(z.mu == doctest::Approx(0.32));
  CHECK(z.sigma2 == doctest::Approx(0.2 * (2.0 / 3.0) - 0.1024).epsilon(1e-12));
}

TEST_CASE("beta_from_moments inverts beta_moments") {
  const auto p = beta_from_moments({0.32, 0.2 * (2.0 / 3.0) - 0.1024});
  CHECK(p.alpha == doctest::Approx(1.9310344827586).epsilon(1e-10));
  CHECK(p.beta == doctest::Approx(4.1034482758621).epsilon(1e-10));
  Rng rng(RngSeed{3, 1});
  for (int k = 0; k < 1000; ++k) {
    const BetaParams q{rng.uniform(0.1, 20.0), rng.uniform(0.1, 20.0)};
    const auto back = beta_from_moments(beta_moments(q));
    CHECK(back.alpha == doctest::Approx(q.alpha).epsilon(1e-9));
    CHECK(back.beta == doctest::Approx(q.beta).epsilon(1e-9));
  }
}

TEST_CASE("moment conversions reject infeasible input") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code_of([] { beta_from_moments({0.5, 0.25}); }) == ErrorCode::kInfeasibleMoments);
  CHECK(code_of([] { beta_from_moments({0.5, 0.0}); }) == ErrorCode::kInfeasibleMoments);
  CHECK(code_of([] { beta_from_moments({1.0, 0.01}); }) == ErrorCode::kInfeasibleMoments);
  CHECK(code_of([] { gaussian_from_moments({0.5, 0.0}); }) == ErrorCode::kNonPositiveVariance);
  CHECK(gaussian_from_moments({0.3, 0.01}).sigma2 == 0.01);
}

TEST_CASE("limit-case density") {
  CHECK(limit_case_density(0.5) == doctest::Approx(std::log(2.0)));
  CHECK(limit_case_density(1.0) == 0.0);
  CHECK_THROWS_AS(limit_case_density(0.0), Error);
  // integral of -ln z over (0,1] is 1
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += limit_case_density((i + 0.5) / n);
  CHECK(sum / n == doctest::Approx(1.0).epsilon(1e-4));
}
