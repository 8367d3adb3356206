#include "slmc/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "slmc/error.hpp"

namespace slmc {

namespace {

constexpr double kFusionDenominatorFloor = 1e-15;

bool in_unit(double v) { return v >= -kSimplexTolerance && v <= 1.0 + kSimplexTolerance; }

OpinionVerdict fault(OpinionFault f, std::string detail) { return {f, std::move(detail)}; }

void require_valid(const BinomialOpinion& op, const char* role) {
  if (auto v = validate_opinion(op); !v) {
    throw Error(ErrorCode::kOutOfRange,
                std::string(role) + " is not a valid opinion: " + v.detail);
  }
}

// Slightly negative masses from cancellation are snapped to zero.
double snap_mass(double v) { return v < 0.0 && v > -kSimplexTolerance ? 0.0 : v; }

}  // namespace

MappingConstant::MappingConstant(double w) : w_(w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw Error(ErrorCode::kOutOfRange, "mapping constant must be positive and finite");
  }
}

OpinionVerdict validate_opinion(const BinomialOpinion& op) {
  if (!std::isfinite(op.b) || !std::isfinite(op.d) || !std::isfinite(op.u) ||
      !std::isfinite(op.a)) {
    return fault(OpinionFault::kNotFinite, "non-finite component");
  }
  if (!in_unit(op.b)) return fault(OpinionFault::kBeliefRange, "b outside [0,1]");
  if (!in_unit(op.d)) return fault(OpinionFault::kDisbeliefRange, "d outside [0,1]");
  if (!in_unit(op.u)) return fault(OpinionFault::kUncertaintyRange, "u outside [0,1]");
  if (!in_unit(op.a)) return fault(OpinionFault::kPriorRange, "a outside [0,1]");
  const double mass = op.b + op.d + op.u;
  if (std::abs(mass - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "b + d + u = " << mass;
    return fault(OpinionFault::kMassSum, msg.str());
  }
  return {};
}

OpinionVerdict validate_opinion(const MultinomialOpinion& op) {
  if (op.belief.size() != op.prior.size() || op.belief.empty()) {
    return fault(OpinionFault::kDimensionMismatch, "belief and prior lengths differ");
  }
  if (!std::isfinite(op.uncertainty)) return fault(OpinionFault::kNotFinite, "non-finite u");
  for (std::size_t i = 0; i < op.belief.size(); ++i) {
    if (!std::isfinite(op.belief[i]) || !std::isfinite(op.prior[i])) {
      return fault(OpinionFault::kNotFinite, "non-finite component");
    }
    if (!in_unit(op.belief[i])) return fault(OpinionFault::kBeliefRange, "belief outside [0,1]");
    if (!in_unit(op.prior[i])) return fault(OpinionFault::kPriorRange, "prior outside [0,1]");
  }
  if (!in_unit(op.uncertainty)) {
    return fault(OpinionFault::kUncertaintyRange, "u outside [0,1]");
  }
  const double mass = std::accumulate(op.belief.begin(), op.belief.end(), op.uncertainty);
  if (std::abs(mass - 1.0) > kSimplexTolerance) {
    return fault(OpinionFault::kMassSum, "sum(b) + u != 1");
  }
  const double prior_sum = std::accumulate(op.prior.begin(), op.prior.end(), 0.0);
  if (std::abs(prior_sum - 1.0) > kSimplexTolerance) {
    return fault(OpinionFault::kPriorSum, "sum(a) != 1");
  }
  return {};
}

double project_probability(const BinomialOpinion& op) noexcept { return op.b + op.a * op.u; }

BetaParams opinion_to_beta(const BinomialOpinion& op, MappingConstant w) {
  if (!(op.u > kSimplexTolerance)) {
    throw Error(ErrorCode::kZeroUncertainty, "dogmatic opinion has no Beta image");
  }
  const double W = w.value();
  return {W * (op.b / op.u + op.a), W * (op.d / op.u + (1.0 - op.a))};
}

BinomialOpinion beta_to_opinion(const BetaParams& p, double prior, MappingConstant w) {
  const double W = w.value();
  if (!p.valid() || !(prior >= 0.0 && prior <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "invalid Beta parameters or prior");
  }
  const double s = p.alpha + p.beta;
  const double b_num = p.alpha - W * prior;
  const double d_num = p.beta - W * (1.0 - prior);
  // Relative slack absorbs the rounding of an exact opinion_to_beta image.
  if (b_num < -kSimplexTolerance * s || d_num < -kSimplexTolerance * s) {
    std::ostringstream msg;
    msg << "Beta(" << p.alpha << ", " << p.beta << ") with prior " << prior
        << " would give negative belief mass (need alpha >= W*a and beta >= W*(1-a))";
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
  return {std::max(0.0, b_num) / s, std::max(0.0, d_num) / s, W / s, prior};
}

DirichletParams opinion_to_dirichlet(const MultinomialOpinion& op, MappingConstant w) {
  if (!(op.uncertainty > kSimplexTolerance)) {
    throw Error(ErrorCode::kZeroUncertainty, "dogmatic opinion has no Dirichlet image");
  }
  if (op.belief.size() != op.prior.size()) {
    throw Error(ErrorCode::kOutOfRange, "belief and prior lengths differ");
  }
  DirichletParams out;
  out.alpha.reserve(op.belief.size());
  for (std::size_t i = 0; i < op.belief.size(); ++i) {
    out.alpha.push_back(w.value() * (op.belief[i] / op.uncertainty + op.prior[i]));
  }
  return out;
}

MultinomialOpinion dirichlet_to_opinion(const DirichletParams& p, std::span<const double> prior,
                                        MappingConstant w) {
  const double W = w.value();
  if (p.alpha.size() != prior.size() || p.alpha.size() < 2) {
    throw Error(ErrorCode::kOutOfRange, "Dirichlet and prior dimensions differ");
  }
  const double s = std::accumulate(p.alpha.begin(), p.alpha.end(), 0.0);
  MultinomialOpinion out;
  out.prior.assign(prior.begin(), prior.end());
  out.uncertainty = W / s;
  for (std::size_t i = 0; i < p.alpha.size(); ++i) {
    if (!(p.alpha[i] > 0.0)) {
      throw Error(ErrorCode::kOutOfRange, "Dirichlet parameters must be positive");
    }
    const double num = p.alpha[i] - W * prior[i];
    if (num < -kSimplexTolerance * s) {
      std::ostringstream msg;
      msg << "alpha[" << i << "] = " << p.alpha[i] << " < W*a[" << i << "] = " << W * prior[i];
      throw Error(ErrorCode::kOutOfRange, msg.str());
    }
    out.belief.push_back(std::max(0.0, num) / s);
  }
  return out;
}

BinomialOpinion multiply(const BinomialOpinion& x, const BinomialOpinion& y) {
  require_valid(x, "left factor");
  require_valid(y, "right factor");
  const double denom = 1.0 - x.a * y.a;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kDegeneratePrior, "multiplication undefined when a_x = a_y = 1");
  }
  BinomialOpinion z;
  z.b = x.b * y.b + ((1.0 - x.a) * y.a * x.b * y.u + x.a * (1.0 - y.a) * x.u * y.b) / denom;
  z.d = x.d + y.d - x.d * y.d;
  z.u = x.u * y.u + ((1.0 - y.a) * x.b * y.u + (1.0 - x.a) * x.u * y.b) / denom;
  z.a = x.a * y.a;
  return z;
}

BinomialOpinion multiply_many(std::span<const BinomialOpinion> ops) {
  if (ops.empty()) {
    throw Error(ErrorCode::kEmptyInput, "multiply_many needs at least one opinion");
  }
  BinomialOpinion acc = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    try {
      acc = multiply(acc, ops[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "factor " + std::to_string(i) + ": " + e.what());
    }
  }
  return acc;
}

BinomialOpinion fuse(const BinomialOpinion& x, const BinomialOpinion& y, MappingConstant w,
                     FusionVarianceTerm term, FusionTrace* trace) {
  require_valid(x, "left operand");
  require_valid(y, "right operand");
  if (std::abs(x.a - y.a) > kSimplexTolerance) {
    std::ostringstream msg;
    msg << "fusion needs a shared prior, got " << x.a << " and " << y.a;
    throw Error(ErrorCode::kPriorMismatch, msg.str());
  }
  if (!(x.u > kSimplexTolerance) || !(y.u > kSimplexTolerance)) {
    throw Error(ErrorCode::kZeroUncertainty, "fusion needs both uncertainties > 0");
  }
  const double W = w.value();
  const double a = x.a;

  const double joint = x.b * y.b + y.b * a * x.u + x.b * a * y.u + a * a * x.u * y.u;
  const double m_den = 2.0 * joint + 1.0 - y.b - a * y.u - x.b - a * x.u;
  if (!(m_den > kFusionDenominatorFloor)) {
    throw Error(ErrorCode::kDegenerateMean, "fused mean denominator vanishes");
  }
  const double m = joint / m_den;
  if (!(m > 0.0 && m < 1.0)) {
    throw Error(ErrorCode::kDegenerateMean, "fused mean is not strictly inside (0,1)");
  }

  auto spread = [&](const BinomialOpinion& op) {
    if (term == FusionVarianceTerm::kAsPrinted) {
      return op.b - op.b * op.b - a * op.u - a * a * op.u * op.u;
    }
    const double p = op.b + a * op.u;
    return p * (1.0 - p);
  };
  const double gx = (W / x.u + 1.0) * spread(x);
  const double gy = (W / y.u + 1.0) * spread(y);

  const double c0 = W * a / m;
  const double c1 = W * (1.0 - a) / (1.0 - m);
  double c2 = gx * gy / (m * (1.0 - m) * (gy + gx)) - 1.0;
  if (!std::isfinite(c2)) {
    c2 = -std::numeric_limits<double>::infinity();
  }
  const double s = std::max({c0, c1, c2});

  if (trace != nullptr) {
    *trace = FusionTrace{m, s, {c0, c1, c2}};
  }
  return {snap_mass((m * s - W * a) / s), snap_mass(((1.0 - m) * s - W * (1.0 - a)) / s), W / s,
          a};
}

std::string to_string(const BinomialOpinion& op) {
  std::ostringstream out;
  out.precision(9);
  out << "(b=" << op.b << ", d=" << op.d << ", u=" << op.u << ", a=" << op.a << ")";
  return out.str();
}

}  // namespace slmc
