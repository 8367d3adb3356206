#include <cmath>
#include <vector>

#include "doctest.h"
#include "slmc/error.hpp"
#include "slmc/monte_carlo.hpp"
#include "slmc/opinion.hpp"

using namespace slmc;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

const BinomialOpinion kX{0.61, 0.30, 0.09, 0.79};
const BinomialOpinion kY{0.28, 0.66, 0.06, 0.46};

}  // namespace

TEST_CASE("validation") {
  CHECK(validate_opinion(kX).ok());
  CHECK(validate_opinion(BinomialOpinion::vacuous()).ok());
  CHECK(validate_opinion(BinomialOpinion{0.5, 0.5, 0.1, 0.5}).fault == OpinionFault::kMassSum);
  CHECK(validate_opinion(BinomialOpinion{-0.1, 0.6, 0.5, 0.5}).fault != OpinionFault::kNone);
  CHECK(validate_opinion(BinomialOpinion{0.2, 0.3, 0.5, 1.5}).fault == OpinionFault::kPriorRange);
  CHECK(validate_opinion(BinomialOpinion{NAN, 0.3, 0.5, 0.5}).fault == OpinionFault::kNotFinite);
  MultinomialOpinion m{{0.2, 0.3, 0.1}, 0.4, {0.2, 0.3, 0.5}};
  CHECK(validate_opinion(m).ok());
  m.prior = {0.2, 0.3};
  CHECK(validate_opinion(m).fault == OpinionFault::kDimensionMismatch);
  m.prior = {0.2, 0.3, 0.6};
  CHECK(validate_opinion(m).fault == OpinionFault::kPriorSum);
}

TEST_CASE("projected probability") {
  CHECK(project_probability(kX) == doctest::Approx(0.6811).epsilon(1e-14));
  CHECK(project_probability(kY) == doctest::Approx(0.3076).epsilon(1e-14));
}

TEST_CASE("opinion to beta") {
  const auto p = opinion_to_beta(kX);
  CHECK(p.alpha == doctest::Approx(15.1355555555556).epsilon(1e-12));
  CHECK(p.beta == doctest::Approx(7.0866666666667).epsilon(1e-12));
  const auto v = opinion_to_beta(BinomialOpinion::vacuous(0.5));
  CHECK(v.alpha == 1.0);
  CHECK(v.beta == 1.0);
  CHECK(code_of([] { opinion_to_beta({0.5, 0.5, 0.0, 0.5}); }) == ErrorCode::kZeroUncertainty);
  const auto p3 = opinion_to_beta(kX, MappingConstant(3.0));
  CHECK(p3.alpha == doctest::Approx(3.0 * (0.61 / 0.09 + 0.79)));
  CHECK_THROWS_AS(MappingConstant(0.0), Error);
}

TEST_CASE("beta to opinion") {
  const auto op = beta_to_opinion({4.0, 2.0}, 0.5);
  CHECK(op.b == doctest::Approx(0.5));
  CHECK(op.d == doctest::Approx(1.0 / 6.0));
  CHECK(op.u == doctest::Approx(1.0 / 3.0));
  CHECK(code_of([] { beta_to_opinion({0.5, 0.5}, 0.5); }) == ErrorCode::kOutOfRange);
  CHECK(code_of([] { beta_to_opinion({1.0, 5.0}, 0.9); }) == ErrorCode::kOutOfRange);
}

TEST_CASE("mapping round trips") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto op = sample_random_opinion(RngSeed{5, i});
    if (op.u < 1e-6) continue;
    const auto back = beta_to_opinion(opinion_to_beta(op), op.a);
    CHECK(std::abs(back.b - op.b) <= 1e-9);
    CHECK(std::abs(back.d - op.d) <= 1e-9);
    CHECK(std::abs(back.u - op.u) <= 1e-9);
  }
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto p = sample_random_beta_params(RngSeed{6, i});
    if (p.alpha + p.beta < 2.0) continue;
    const double a = p.alpha / (p.alpha + p.beta);
    const auto q = opinion_to_beta(beta_to_opinion(p, a));
    CHECK(std::abs(q.alpha - p.alpha) <= 1e-9 * std::max(1.0, p.alpha));
    CHECK(std::abs(q.beta - p.beta) <= 1e-9 * std::max(1.0, p.beta));
  }
}

TEST_CASE("dirichlet mapping") {
  const MultinomialOpinion m{{0.2, 0.3, 0.1}, 0.4, {0.2, 0.3, 0.5}};
  const auto p = opinion_to_dirichlet(m);
  REQUIRE(p.alpha.size() == 3);
  CHECK(p.alpha[0] == doctest::Approx(2.0 * (0.2 / 0.4 + 0.2)));
  CHECK(p.alpha[2] == doctest::Approx(2.0 * (0.1 / 0.4 + 0.5)));
  const auto back = dirichlet_to_opinion(p, m.prior);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.belief[i] == doctest::Approx(m.belief[i]));
  CHECK(back.uncertainty == doctest::Approx(0.4));
  // binomial case agrees with the beta mapping
  const auto two = opinion_to_dirichlet({{kX.b, kX.d}, kX.u, {kX.a, 1.0 - kX.a}});
  const auto beta = opinion_to_beta(kX);
  CHECK(two.alpha[0] == doctest::Approx(beta.alpha));
  CHECK(two.alpha[1] == doctest::Approx(beta.beta));
}

TEST_CASE("multiply oracle") {
  const auto z = multiply(kX, kY);
  CHECK(z.b == doctest::Approx(0.193240904807).epsilon(1e-11));
  CHECK(z.d == doctest::Approx(0.762).epsilon(1e-14));
  CHECK(z.u == doctest::Approx(0.0447590951932).epsilon(1e-11));
  CHECK(z.a == doctest::Approx(0.3634).epsilon(1e-14));
  CHECK(project_probability(z) == doctest::Approx(0.20950636).epsilon(1e-12));
}

TEST_CASE("multiply properties on random pairs") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto x = sample_random_opinion(RngSeed{8, 2 * i});
    const auto y = sample_random_opinion(RngSeed{8, 2 * i + 1});
    const auto z = multiply(x, y);
    CHECK(validate_opinion(z).ok());
    CHECK(std::abs(project_probability(z) - project_probability(x) * project_probability(y)) <=
          1e-12);
    // commutative
    const auto zr = multiply(y, x);
    CHECK(std::abs(zr.b - z.b) <= 1e-12);
    CHECK(std::abs(zr.u - z.u) <= 1e-12);
  }
}

TEST_CASE("multiply edge cases") {
  const auto v = multiply(BinomialOpinion::vacuous(0.5), BinomialOpinion::vacuous(0.5));
  CHECK(v.b == doctest::Approx(0.0));
  CHECK(v.d == doctest::Approx(0.0));
  CHECK(v.u == doctest::Approx(1.0));
  CHECK(v.a == doctest::Approx(0.25));
  CHECK(code_of([] { multiply({0.2, 0.3, 0.5, 1.0}, {0.1, 0.1, 0.8, 1.0}); }) ==
        ErrorCode::kDegeneratePrior);
  CHECK_THROWS_AS(multiply({0.6, 0.6, 0.1, 0.5}, kY), Error);
  const std::vector<BinomialOpinion> chain{kX, kY, kX};
  const auto m = multiply_many(chain);
  const auto manual = multiply(multiply(kX, kY), kX);
  CHECK(m.b == manual.b);
  CHECK(m.u == manual.u);
}

TEST_CASE("fuse oracle, printed spread term") {
  FusionTrace t;
  const auto z = fuse({0.16, 0.58, 0.26, 0.57}, {0.18, 0.64, 0.18, 0.57}, {},
                      FusionVarianceTerm::kAsPrinted, &t);
  CHECK(std::abs(z.b) <= 1e-12);
  CHECK(z.d == doctest::Approx(0.73808069990243).epsilon(1e-12));
  CHECK(z.u == doctest::Approx(0.26191930009757).epsilon(1e-12));
  CHECK(t.mean == doctest::Approx(0.149294001055615).epsilon(1e-12));
  CHECK(t.strength == doctest::Approx(7.63593976944411).epsilon(1e-12));
  CHECK(t.candidates[1] == doctest::Approx(1.01092504469).epsilon(1e-10));
  CHECK(t.candidates[2] == doctest::Approx(-10.5825067635).epsilon(1e-10));
}

TEST_CASE("fuse oracle, moment-matched spread term") {
  FusionTrace t;
  const auto z = fuse({0.5, 0.3, 0.2, 0.5}, {0.4, 0.4, 0.2, 0.5}, {},
                      FusionVarianceTerm::kMomentMatched, &t);
  CHECK(t.mean == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(t.strength == doctest::Approx(4.61224489795918).epsilon(1e-12));
  CHECK(z.b == doctest::Approx(0.383185840707965).epsilon(1e-12));
  CHECK(z.d == doctest::Approx(0.183185840707965).epsilon(1e-12));
  CHECK(z.u == doctest::Approx(0.433628318584071).epsilon(1e-12));

  const auto printed = fuse({0.5, 0.3, 0.2, 0.5}, {0.4, 0.4, 0.2, 0.5}, {},
                            FusionVarianceTerm::kAsPrinted);
  CHECK(printed.b == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(printed.u == doctest::Approx(0.8).epsilon(1e-12));

  const auto strong = fuse({0.6, 0.3, 0.1, 0.5}, {0.7, 0.2, 0.1, 0.5});
  CHECK(strong.b == doctest::Approx(0.784255000312194).epsilon(1e-12));
  CHECK(strong.u == doctest::Approx(0.127142173288655).epsilon(1e-12));
}

TEST_CASE("fuse of vacuous opinions is vacuous") {
  FusionTrace t;
  const auto z = fuse(BinomialOpinion::vacuous(), BinomialOpinion::vacuous(), {},
                      FusionVarianceTerm::kMomentMatched, &t);
  CHECK(z.b == doctest::Approx(0.0));
  CHECK(z.d == doctest::Approx(0.0));
  CHECK(z.u == doctest::Approx(1.0));
  CHECK(t.candidates[0] == doctest::Approx(2.0));
  CHECK(t.candidates[2] == doctest::Approx(0.5));
}

TEST_CASE("fuse properties on random same-prior pairs") {
  for (auto term : {FusionVarianceTerm::kMomentMatched, FusionVarianceTerm::kAsPrinted}) {
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const auto x = sample_random_opinion(RngSeed{9, 2 * i});
      auto y = sample_random_opinion(RngSeed{9, 2 * i + 1});
      y.a = x.a;
      FusionTrace t;
      const auto z = fuse(x, y, {}, term, &t);
      CHECK(validate_opinion(z).ok());
      CHECK(std::abs(z.u - 2.0 / t.strength) <= 1e-12);
      CHECK(std::abs(project_probability(z) - t.mean) <= 1e-12);
      CHECK(z.a == x.a);
    }
  }
}

TEST_CASE("fuse errors") {
  CHECK(code_of([] { fuse({0.2, 0.3, 0.5, 0.3}, {0.2, 0.3, 0.5, 0.4}); }) ==
        ErrorCode::kPriorMismatch);
  CHECK(code_of([] { fuse({0.5, 0.5, 0.0, 0.5}, {0.2, 0.3, 0.5, 0.5}); }) ==
        ErrorCode::kZeroUncertainty);
}
