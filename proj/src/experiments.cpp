#include "slmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "slmc/error.hpp"
#include "slmc/kde.hpp"
#include "slmc/monte_carlo.hpp"

#include "json.hpp"

namespace slmc {

namespace {

// Derive tags that partition a repetition's randomness by purpose.
constexpr std::uint64_t kTagOperands = 0;
constexpr std::uint64_t kTagSamples = 100;
constexpr std::uint64_t kTagFusionRedraw = 200;
constexpr std::uint64_t kTagIntegration = 300;

// Operand draws discarded before a repetition gives up.
constexpr std::size_t kMaxOperandRejections = 10'000;

// Fraction of the smallest approximant distance the KDE bias may reach.
constexpr double kBiasGateRatio = 1e-2;

struct Operands {
  std::vector<BinomialOpinion> opinions;
  std::vector<BetaParams> betas;
  std::size_t rejections = 0;
};

void count_rejection(Operands& ops) {
  if (++ops.rejections > kMaxOperandRejections) {
    throw Error(ErrorCode::kRedrawLimit, "operand draws keep violating the mapping preconditions");
  }
}

Operands draw_opinion_operands(const ExperimentConfig& cfg, std::size_t count, RngSeed seed) {
  Operands ops;
  std::uint64_t tag = 0;
  while (ops.opinions.size() < count) {
    BinomialOpinion op = sample_random_opinion(seed.derive(tag++));
    if (cfg.op == Operator::kFusion && !ops.opinions.empty()) {
      op.a = ops.opinions.front().a;
    }
    if (!(op.u > kSimplexTolerance)) {
      count_rejection(ops);
      continue;
    }
    ops.opinions.push_back(op);
    ops.betas.push_back(opinion_to_beta(op, cfg.w));
  }
  return ops;
}

std::optional<BinomialOpinion> try_beta_to_opinion(const BetaParams& p, double prior,
                                                   MappingConstant w) {
  if (p.alpha + p.beta < w.value()) return std::nullopt;
  try {
    return beta_to_opinion(p, prior, w);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Beta operands from U(0,10]^2 with rejection. Each operand takes its mean as
// prior; fusion operands share the average of the two means.
Operands draw_pdf_operands(const ExperimentConfig& cfg, std::size_t count, RngSeed seed) {
  Operands ops;
  std::uint64_t tag = 0;
  if (cfg.op == Operator::kFusion) {
    for (;;) {
      const BetaParams p0 = sample_random_beta_params(seed.derive(tag++));
      const BetaParams p1 = sample_random_beta_params(seed.derive(tag++));
      const double prior = 0.5 * (beta_moments(p0).mu + beta_moments(p1).mu);
      auto o0 = try_beta_to_opinion(p0, prior, cfg.w);
      auto o1 = try_beta_to_opinion(p1, prior, cfg.w);
      if (o0 && o1) {
        ops.opinions = {*o0, *o1};
        ops.betas = {p0, p1};
        return ops;
      }
      count_rejection(ops);
    }
  }
  while (ops.opinions.size() < count) {
    const BetaParams p = sample_random_beta_params(seed.derive(tag++));
    if (auto op = try_beta_to_opinion(p, beta_moments(p).mu, cfg.w)) {
      ops.opinions.push_back(*op);
      ops.betas.push_back(p);
    } else {
      count_rejection(ops);
    }
  }
  return ops;
}

Operands draw_operands(const ExperimentConfig& cfg, std::size_t count, RngSeed seed) {
  return cfg.start == Start::kOpinion ? draw_opinion_operands(cfg, count, seed)
                                      : draw_pdf_operands(cfg, count, seed);
}

SampleBatch simulate(Operator op, const std::vector<BetaParams>& betas, std::size_t n,
                     RngSeed seed) {
  SampleBatch acc = sample_beta(betas.front(), n, seed.derive(kTagSamples));
  if (op == Operator::kProduct) {
    for (std::size_t i = 1; i < betas.size(); ++i) {
      acc = push_product_samples(acc, sample_beta(betas[i], n, seed.derive(kTagSamples + i)));
    }
    return acc;
  }
  const SampleBatch other = sample_beta(betas[1], n, seed.derive(kTagSamples + 1));
  auto rng = std::make_shared<Rng>(seed.derive(kTagFusionRedraw));
  const BetaParams px = betas[0];
  const BetaParams py = betas[1];
  return push_fusion_samples(acc, other, [rng, px, py] {
    const double x = rng->beta(px.alpha, px.beta);
    return std::pair{x, rng->beta(py.alpha, py.beta)};
  });
}

BinomialOpinion sl_result(const ExperimentConfig& cfg, const std::vector<BinomialOpinion>& ops) {
  if (cfg.op == Operator::kProduct) {
    return multiply_many(ops);
  }
  return fuse(ops[0], ops[1], cfg.w, cfg.fusion_term);
}

MomentPair analytic_product_moments(const std::vector<BetaParams>& betas) {
  MomentPair acc = beta_moments(betas.front());
  for (std::size_t i = 1; i < betas.size(); ++i) {
    acc = product_moments_analytic(acc, beta_moments(betas[i]));
  }
  return acc;
}

struct Approximants {
  BinomialOpinion sl_opinion;
  BetaParams sl;
  MomentPair mc_moments;
  std::optional<MomentPair> an_moments;
};

Approximants build_approximants(const ExperimentConfig& cfg, const Operands& ops,
                                const SampleBatch& samples) {
  Approximants out;
  out.sl_opinion = sl_result(cfg, ops.opinions);
  out.sl = opinion_to_beta(out.sl_opinion, cfg.w);
  out.mc_moments = estimate_moments(samples);
  if (cfg.op == Operator::kProduct) {
    out.an_moments = analytic_product_moments(ops.betas);
  }
  return out;
}

enum class Reference { kKde, kExact };

struct Protocol {
  std::string name;
  Reference reference = Reference::kKde;
  std::vector<std::string> labels;
};

// The KDE approximant is evaluated directly from the model, not through here.
DensityEvaluator evaluator_for(const std::string& name, const Approximants& ap) {
  if (name == label::kSl) return beta_evaluator(ap.sl, name);
  if (name == label::kGaussMc) return gaussian_evaluator(gaussian_from_moments(ap.mc_moments), name);
  if (name == label::kBetaMc) return beta_evaluator(beta_from_moments(ap.mc_moments), name);
  if (name == label::kGaussAn) return gaussian_evaluator(gaussian_from_moments(*ap.an_moments), name);
  if (name == label::kBetaAn) return beta_evaluator(beta_from_moments(*ap.an_moments), name);
  throw Error(ErrorCode::kInvalidConfig, "unknown approximant " + name);
}

struct RepOutcome {
  std::vector<std::pair<std::string, EstimatorResult>> distances;
  std::size_t rejections = 0;
  bool kde_self_zero = true;
};

RepOutcome run_rep(const ExperimentConfig& cfg, const Protocol& protocol, std::size_t n,
                   std::size_t factors, RngSeed seed, const Operands* fixed) {
  Operands ops = fixed != nullptr ? *fixed : draw_operands(cfg, factors, seed.derive(kTagOperands));
  const SampleBatch samples = simulate(cfg.op, ops.betas, n, seed);
  const Approximants ap = build_approximants(cfg, ops, samples);
  KdeModel kde = fit_logit_kde(samples, cfg.eps_clamp);

  // Build every approximant before the expensive evaluation so failures surface early.
  std::vector<DensityEvaluator> evaluators;
  for (const auto& name : protocol.labels) {
    evaluators.push_back(name == label::kKde ? DensityEvaluator{} : evaluator_for(name, ap));
  }

  const IntegrationOptions opts{cfg.integration_mode, cfg.eps_clamp};
  const auto pts = integration_points(cfg.m_integration, seed.derive(kTagIntegration), opts);
  RepOutcome out;
  out.rejections = ops.rejections;
  std::vector<double> reference;
  if (protocol.reference == Reference::kKde) {
    reference = kde_density(kde, pts);
    out.kde_self_zero = distance_from_values(reference, reference).value == 0.0;
  } else {
    reference = limit_case_evaluator().evaluate(pts);
  }
  for (std::size_t i = 0; i < evaluators.size(); ++i) {
    const auto values = protocol.labels[i] == label::kKde ? kde_density(kde, pts)
                                                          : evaluators[i].evaluate(pts);
    out.distances.emplace_back(protocol.labels[i], distance_from_values(reference, values));
  }
  return out;
}

double smallest_distance(const std::vector<std::pair<std::string, EstimatorResult>>& ds) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [name, r] : ds) {
    if (name != label::kKde) best = std::min(best, r.value);
  }
  return best;
}

void sweep_point(const ExperimentConfig& cfg, const Protocol& protocol, std::size_t n,
                 std::size_t factors, const Operands* fixed, DistanceStudy& study) {
  GroupDiagnostics diag;
  diag.n_samples = n;
  diag.l_factors = factors;
  diag.bias_bound = kde_bias_bound(n);

  for (std::size_t rep = 0; rep < cfg.n_reps; ++rep) {
    const RngSeed base = RngSeed{cfg.seed, rep}.derive(n).derive(factors);
    for (std::uint64_t attempt = 0;; ++attempt) {
      RepOutcome outcome;
      try {
        outcome = run_rep(cfg, protocol, n, factors, base.derive(attempt), fixed);
      } catch (const Error& e) {
        ++diag.failed_reps;
        diag.failures.push_back("rep " + std::to_string(rep) + ": " + e.what());
        if (diag.failed_reps * 10 > cfg.n_reps) {
          std::ostringstream msg;
          msg << protocol.name << ": " << diag.failed_reps << " failed repetitions out of "
              << cfg.n_reps << " at n=" << n << " exceeds the 10% redraw limit; last: "
              << e.what();
          throw Error(ErrorCode::kRedrawLimit, msg.str());
        }
        continue;
      }
      diag.operand_rejections += outcome.rejections;
      if (!outcome.kde_self_zero) ++diag.kde_self_nonzero;
      if (diag.bias_bound > kBiasGateRatio * smallest_distance(outcome.distances)) {
        ++diag.bias_gate_violations;
      }
      for (auto& [name, r] : outcome.distances) {
        study.records.push_back(
            RunRecord{cfg.op, cfg.start, n, factors, rep, name, r.value, r.std_error});
      }
      break;
    }
  }
  study.diagnostics.push_back(std::move(diag));
}

void finish_study(DistanceStudy& study) {
  study.aggregates = aggregate_stats(study.records);
  for (const auto& diag : study.diagnostics) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : study.aggregates) {
      if (a.n_samples == diag.n_samples && a.l_factors == diag.l_factors &&
          a.approximant != label::kKde) {
        best = std::min(best, a.mean);
      }
    }
    for (auto& a : study.aggregates) {
      if (a.n_samples == diag.n_samples && a.l_factors == diag.l_factors) {
        a.rejections = diag.operand_rejections + diag.failed_reps;
        a.bias_gate_ok = diag.bias_bound <= kBiasGateRatio * best;
      }
    }
  }
}

std::vector<std::size_t> ladder_or(const ExperimentConfig& cfg, std::vector<std::size_t> fallback) {
  return cfg.n_samples.empty() ? fallback : cfg.n_samples;
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Operator op) noexcept {
  return op == Operator::kProduct ? "product" : "fusion";
}

std::string_view to_string(Start start) noexcept {
  return start == Start::kOpinion ? "opinion" : "pdf";
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  for (std::size_t n : n_samples) {
    if (n < 10) fail("n_samples must be at least 10");
  }
  if (n_reps < 1) fail("n_reps must be at least 1");
  if (m_integration < 2) fail("m_integration must be at least 2");
  if (l_min < 2 || l_max < l_min || l_max > 5) fail("l_factors range must lie within 2..5");
  if (!(eps_clamp > 0.0 && eps_clamp < 0.5)) fail("eps_clamp must lie in (0, 0.5)");
  if (operands && op == Operator::kFusion &&
      std::abs(operands->first.a - operands->second.a) > kSimplexTolerance) {
    throw Error(ErrorCode::kPriorMismatch, "fusion operands must share a prior");
  }
}

std::vector<AggregateStat> aggregate_stats(const std::vector<RunRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no records to aggregate");
  }
  using Key = std::tuple<int, int, std::size_t, std::size_t, std::string>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) {
    groups[{static_cast<int>(r.op), static_cast<int>(r.start), r.n_samples, r.l_factors,
            r.approximant}]
        .push_back(&r);
  }
  std::vector<AggregateStat> out;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const RunRecord* a, const RunRecord* b) { return a->rep < b->rep; });
    AggregateStat s;
    s.op = members.front()->op;
    s.start = members.front()->start;
    s.n_samples = members.front()->n_samples;
    s.l_factors = members.front()->l_factors;
    s.approximant = members.front()->approximant;
    s.reps = members.size();
    double sum = 0.0;
    for (const auto* r : members) sum += r->distance;
    s.mean = sum / static_cast<double>(s.reps);
    if (s.reps > 1) {
      double ss = 0.0;
      for (const auto* r : members) ss += (r->distance - s.mean) * (r->distance - s.mean);
      s.std = std::sqrt(ss / static_cast<double>(s.reps - 1));
    } else {
      s.single_rep = true;
    }
    out.push_back(std::move(s));
  }
  return out;
}

DensityTable run_qualitative(const ExperimentConfig& cfg) {
  cfg.validate();
  DensityTable table;
  table.op = cfg.op;
  table.n_samples = cfg.n_samples.empty() ? kQualitativeSamples : cfg.n_samples.front();
  const RngSeed seed = RngSeed{cfg.seed, 0}.derive(table.n_samples);

  Operands ops;
  if (cfg.operands) {
    ops.opinions = {cfg.operands->first, cfg.operands->second};
    // Fusion operands are checked by the operator itself before any mapping.
    if (cfg.op == Operator::kFusion) {
      (void)fuse(ops.opinions[0], ops.opinions[1], cfg.w, cfg.fusion_term);
    }
    ops.betas = {opinion_to_beta(ops.opinions[0], cfg.w), opinion_to_beta(ops.opinions[1], cfg.w)};
  } else {
    ops = draw_operands(cfg, 2, seed.derive(kTagOperands));
  }
  table.x = ops.opinions[0];
  table.y = ops.opinions[1];
  table.px = ops.betas[0];
  table.py = ops.betas[1];

  const SampleBatch samples = simulate(cfg.op, ops.betas, table.n_samples, seed);
  table.fusion_resampled = samples.resampled;
  const Approximants ap = build_approximants(cfg, ops, samples);
  table.z = ap.sl_opinion;
  const KdeModel kde = fit_logit_kde(samples, cfg.eps_clamp);

  const std::size_t m = cfg.m_integration;
  table.grid.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    table.grid[i] = cfg.eps_clamp + (1.0 - 2.0 * cfg.eps_clamp) * static_cast<double>(i) /
                                        static_cast<double>(m - 1);
  }
  table.kde = kde_density(kde, table.grid);
  table.sl = beta_evaluator(ap.sl, label::kSl).evaluate(table.grid);
  table.gauss_mc =
      gaussian_evaluator(gaussian_from_moments(ap.mc_moments), label::kGaussMc).evaluate(table.grid);
  table.beta_mc =
      beta_evaluator(beta_from_moments(ap.mc_moments), label::kBetaMc).evaluate(table.grid);
  if (ap.an_moments) {
    table.gauss_an = gaussian_evaluator(gaussian_from_moments(*ap.an_moments), label::kGaussAn)
                         .evaluate(table.grid);
    table.beta_an =
        beta_evaluator(beta_from_moments(*ap.an_moments), label::kBetaAn).evaluate(table.grid);
  }
  return table;
}

DistanceStudy run_quantitative(const ExperimentConfig& cfg) {
  cfg.validate();
  Protocol protocol{"quantitative", Reference::kKde, {label::kSl, label::kGaussMc, label::kBetaMc}};
  if (cfg.op == Operator::kProduct) {
    protocol.labels.push_back(label::kGaussAn);
    protocol.labels.push_back(label::kBetaAn);
  }
  DistanceStudy study{protocol.name, "kde", cfg, {}, {}, {}};
  for (std::size_t n : ladder_or(cfg, kQuantitativeLadder)) {
    sweep_point(cfg, protocol, n, 2, nullptr, study);
  }
  finish_study(study);
  return study;
}

DistanceStudy run_limit_case(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.op != Operator::kProduct) {
    throw Error(ErrorCode::kInvalidConfig, "the limit case is defined for the product operator");
  }
  Protocol protocol{
      "limit-case", Reference::kExact, {label::kKde, label::kSl, label::kBetaMc, label::kBetaAn}};
  Operands fixed;
  fixed.opinions = {BinomialOpinion::vacuous(0.5), BinomialOpinion::vacuous(0.5)};
  fixed.betas = {opinion_to_beta(fixed.opinions[0], cfg.w),
                 opinion_to_beta(fixed.opinions[1], cfg.w)};
  DistanceStudy study{protocol.name, "exact", cfg, {}, {}, {}};
  for (std::size_t n : ladder_or(cfg, {kLimitCaseSamples})) {
    sweep_point(cfg, protocol, n, 2, &fixed, study);
  }
  finish_study(study);
  return study;
}

DistanceStudy run_multi_product(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.op != Operator::kProduct) {
    throw Error(ErrorCode::kInvalidConfig, "multi-product requires the product operator");
  }
  Protocol protocol{"multi-product", Reference::kKde, {label::kSl, label::kBetaAn}};
  DistanceStudy study{protocol.name, "kde", cfg, {}, {}, {}};
  for (std::size_t n : ladder_or(cfg, {kMultiProductSamples})) {
    for (std::size_t factors = cfg.l_min; factors <= cfg.l_max; ++factors) {
      sweep_point(cfg, protocol, n, factors, nullptr, study);
    }
  }
  finish_study(study);
  return study;
}

void write_density_csv(std::ostream& out, const DensityTable& t) {
  out << "z,kde,sl,gauss_mc,beta_mc,gauss_an,beta_an\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out << fmt9(t.grid[i]) << ',' << fmt9(t.kde[i]) << ',' << fmt9(t.sl[i]) << ','
        << fmt9(t.gauss_mc[i]) << ',' << fmt9(t.beta_mc[i]) << ',';
    if (t.gauss_an) out << fmt9((*t.gauss_an)[i]);
    out << ',';
    if (t.beta_an) out << fmt9((*t.beta_an)[i]);
    out << '\n';
  }
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "operator,start,n_samples,l_factors,rep,approximant,distance,stderr\n";
  for (const auto& r : records) {
    out << to_string(r.op) << ',' << to_string(r.start) << ',' << r.n_samples << ','
        << r.l_factors << ',' << r.rep << ',' << r.approximant << ',' << fmt9(r.distance) << ','
        << fmt9(r.std_error) << '\n';
  }
}

void write_aggregates_csv(std::ostream& out, const std::vector<AggregateStat>& aggregates) {
  out << "operator,start,n_samples,l_factors,approximant,mean,std,reps,rejections,bias_gate_ok\n";
  for (const auto& a : aggregates) {
    out << to_string(a.op) << ',' << to_string(a.start) << ',' << a.n_samples << ','
        << a.l_factors << ',' << a.approximant << ',' << fmt9(a.mean) << ',' << fmt9(a.std)
        << ',' << a.reps << ',' << a.rejections << ',' << (a.bias_gate_ok ? "true" : "false")
        << '\n';
  }
}

namespace {

nlohmann::ordered_json opinion_json(const BinomialOpinion& o) {
  return {{"b", o.b}, {"d", o.d}, {"u", o.u}, {"a", o.a}};
}

nlohmann::ordered_json beta_json(const BetaParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}};
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  return {{"operator", to_string(cfg.op)},
          {"start", to_string(cfg.start)},
          {"n_samples", cfg.n_samples},
          {"n_reps", cfg.n_reps},
          {"m_integration", cfg.m_integration},
          {"l_min", cfg.l_min},
          {"l_max", cfg.l_max},
          {"seed", cfg.seed},
          {"eps_clamp", cfg.eps_clamp},
          {"w", cfg.w.value()},
          {"fusion_variance",
           cfg.fusion_term == FusionVarianceTerm::kMomentMatched ? "matched" : "printed"},
          {"integration", cfg.integration_mode == IntegrationMode::kSampled ? "sampled" : "grid"}};
}

}  // namespace

void write_density_json(std::ostream& out, const DensityTable& t) {
  nlohmann::ordered_json j;
  j["operator"] = to_string(t.op);
  j["x"] = opinion_json(t.x);
  j["y"] = opinion_json(t.y);
  j["z"] = opinion_json(t.z);
  j["x_beta"] = beta_json(t.px);
  j["y_beta"] = beta_json(t.py);
  j["n_samples"] = t.n_samples;
  j["fusion_resampled"] = t.fusion_resampled;
  j["grid"] = t.grid;
  j["kde"] = t.kde;
  j["sl"] = t.sl;
  j["gauss_mc"] = t.gauss_mc;
  j["beta_mc"] = t.beta_mc;
  j["gauss_an"] = t.gauss_an ? nlohmann::ordered_json(*t.gauss_an) : nullptr;
  j["beta_an"] = t.beta_an ? nlohmann::ordered_json(*t.beta_an) : nullptr;
  out << j.dump(1) << '\n';
}

void write_study_json(std::ostream& out, const DistanceStudy& study) {
  nlohmann::ordered_json j;
  j["protocol"] = study.protocol;
  j["reference"] = study.reference;
  j["config"] = config_json(study.config);
  j["std_note"] = "std is the sample standard deviation across repetitions (divisor reps - 1)";
  auto& aggs = j["aggregates"] = nlohmann::ordered_json::array();
  for (const auto& a : study.aggregates) {
    aggs.push_back({{"operator", to_string(a.op)},
                    {"start", to_string(a.start)},
                    {"n_samples", a.n_samples},
                    {"l_factors", a.l_factors},
                    {"approximant", a.approximant},
                    {"mean", a.mean},
                    {"std", a.std},
                    {"reps", a.reps},
                    {"single_rep", a.single_rep},
                    {"rejections", a.rejections},
                    {"bias_gate_ok", a.bias_gate_ok}});
  }
  auto& diags = j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : study.diagnostics) {
    diags.push_back({{"n_samples", d.n_samples},
                     {"l_factors", d.l_factors},
                     {"operand_rejections", d.operand_rejections},
                     {"failed_reps", d.failed_reps},
                     {"bias_gate_violations", d.bias_gate_violations},
                     {"kde_self_nonzero", d.kde_self_nonzero},
                     {"bias_bound", d.bias_bound},
                     {"failures", d.failures}});
  }
  auto& recs = j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : study.records) {
    recs.push_back({{"n_samples", r.n_samples},
                    {"l_factors", r.l_factors},
                    {"rep", r.rep},
                    {"approximant", r.approximant},
                    {"distance", r.distance},
                    {"stderr", r.std_error}});
  }
  out << j.dump(1) << '\n';
}

}  // namespace slmc
