#pragma once

#include <span>
#include <string>
#include <vector>

#include "slmc/distributions.hpp"

namespace slmc {

/// Absolute tolerance for simplex membership and prior equality.
inline constexpr double kSimplexTolerance = 1e-12;

/// Binomial opinion (belief, disbelief, uncertainty, prior).
struct BinomialOpinion {
  double b = 0.0;
  double d = 0.0;
  double u = 1.0;
  double a = 0.5;

  static BinomialOpinion vacuous(double prior = 0.5) { return {0.0, 0.0, 1.0, prior}; }
};

struct MultinomialOpinion {
  std::vector<double> belief;
  double uncertainty = 1.0;
  std::vector<double> prior;
};

/// Scale relating opinion masses to Beta/Dirichlet pseudo-counts.
class MappingConstant {
 public:
  constexpr MappingConstant() = default;
  explicit MappingConstant(double w);

  constexpr double value() const noexcept { return w_; }

 private:
  double w_ = 2.0;
};

enum class OpinionFault {
  kNone,
  kNotFinite,
  kMassSum,
  kBeliefRange,
  kDisbeliefRange,
  kUncertaintyRange,
  kPriorRange,
  kDimensionMismatch,
  kPriorSum,
};

struct OpinionVerdict {
  OpinionFault fault = OpinionFault::kNone;
  std::string detail;

  bool ok() const noexcept { return fault == OpinionFault::kNone; }
  explicit operator bool() const noexcept { return ok(); }
};

OpinionVerdict validate_opinion(const BinomialOpinion& op);
OpinionVerdict validate_opinion(const MultinomialOpinion& op);

/// b + a*u.
double project_probability(const BinomialOpinion& op) noexcept;

BetaParams opinion_to_beta(const BinomialOpinion& op, MappingConstant w = {});
BinomialOpinion beta_to_opinion(const BetaParams& p, double prior, MappingConstant w = {});

DirichletParams opinion_to_dirichlet(const MultinomialOpinion& op, MappingConstant w = {});
MultinomialOpinion dirichlet_to_opinion(const DirichletParams& p, std::span<const double> prior,
                                        MappingConstant w = {});

/// Binomial multiplication. Throws kDegeneratePrior when a_x * a_y == 1.
BinomialOpinion multiply(const BinomialOpinion& x, const BinomialOpinion& y);

/// Left fold ((w1 * w2) * w3) ... ; the error message names the failing factor.
BinomialOpinion multiply_many(std::span<const BinomialOpinion> ops);

/// Which variance term enters the third candidate of the fused strength s_Z.
///
/// kMomentMatched uses P(1-P) with P = b + a*u, the variance of each mapped Beta
/// scaled by its strength, which makes the third candidate the delta-method
/// variance match of the fusion map. kAsPrinted uses b - b^2 - a*u - a^2*u^2,
/// which is negative for many inputs and then never wins the max.
enum class FusionVarianceTerm { kMomentMatched, kAsPrinted };

/// Intermediate quantities of a fusion, exposed for diagnostics and tests.
struct FusionTrace {
  double mean = 0.0;      // m_Z
  double strength = 0.0;  // s_Z
  double candidates[3] = {0.0, 0.0, 0.0};
};

/// Fusion of two opinions sharing a prior. Throws kPriorMismatch,
/// kZeroUncertainty or kDegenerateMean.
BinomialOpinion fuse(const BinomialOpinion& x, const BinomialOpinion& y, MappingConstant w = {},
                     FusionVarianceTerm term = FusionVarianceTerm::kMomentMatched,
                     FusionTrace* trace = nullptr);

std::string to_string(const BinomialOpinion& op);

}  // namespace slmc
