#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "slmc/error.hpp"
#include "slmc/experiments.hpp"

using namespace slmc;

namespace {

ExperimentConfig small_config(Operator op, Start start) {
  ExperimentConfig cfg;
  cfg.op = op;
  cfg.start = start;
  cfg.n_samples = {2000};
  cfg.n_reps = 4;
  cfg.m_integration = 200;
  return cfg;
}

std::string records_csv(const DistanceStudy& s) {
  std::ostringstream os;
  write_records_csv(os, s.records);
  return os.str();
}

std::string aggregates_csv(const DistanceStudy& s) {
  std::ostringstream os;
  write_aggregates_csv(os, s.aggregates);
  return os.str();
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("aggregate_stats") {
  std::vector<RunRecord> recs;
  recs.push_back({Operator::kProduct, Start::kOpinion, 100, 2, 1, "sl", 0.3, 0.0});
  recs.push_back({Operator::kProduct, Start::kOpinion, 100, 2, 0, "sl", 0.1, 0.0});
  recs.push_back({Operator::kProduct, Start::kOpinion, 100, 2, 0, "beta_mc", 0.05, 0.0});
  const auto agg = aggregate_stats(recs);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].approximant == "beta_mc");
  CHECK(agg[0].single_rep);
  CHECK(agg[0].std == 0.0);
  CHECK(agg[1].approximant == "sl");
  CHECK(agg[1].mean == doctest::Approx(0.2));
  CHECK(agg[1].std == doctest::Approx(std::sqrt(0.02)));
  CHECK(agg[1].reps == 2);
  CHECK(code_of([] { aggregate_stats({}); }) == ErrorCode::kEmptyInput);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.n_reps = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::kInvalidConfig);
  cfg = {};
  cfg.l_min = 1;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::kInvalidConfig);
  cfg = {};
  cfg.l_max = 6;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::kInvalidConfig);
  cfg = {};
  cfg.eps_clamp = 0.0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::kInvalidConfig);
  cfg = {};
  cfg.m_integration = 1;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::kInvalidConfig);
  cfg = {};
  cfg.op = Operator::kFusion;
  cfg.operands = {BinomialOpinion{0.2, 0.3, 0.5, 0.3}, BinomialOpinion{0.2, 0.3, 0.5, 0.4}};
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::kPriorMismatch);
}

TEST_CASE("quantitative product study") {
  const auto cfg = small_config(Operator::kProduct, Start::kOpinion);
  const auto s = run_quantitative(cfg);
  CHECK(s.records.size() == 4 * 5);
  std::set<std::string> labels;
  for (const auto& a : s.aggregates) labels.insert(a.approximant);
  CHECK(labels == std::set<std::string>{"sl", "gauss_mc", "beta_mc", "gauss_an", "beta_an"});
  for (const auto& r : s.records) {
    CHECK(r.distance >= 0.0);
    CHECK(r.distance <= 2.0 + 1e-9);
  }
  REQUIRE(s.diagnostics.size() == 1);
  CHECK(s.diagnostics[0].kde_self_nonzero == 0);
  CHECK(s.diagnostics[0].bias_bound == doctest::Approx(kde_bias_bound(2000)));
}

TEST_CASE("quantitative fusion study has no analytic columns") {
  const auto s = run_quantitative(small_config(Operator::kFusion, Start::kPdf));
  std::set<std::string> labels;
  for (const auto& a : s.aggregates) labels.insert(a.approximant);
  CHECK(labels == std::set<std::string>{"sl", "gauss_mc", "beta_mc"});
}

TEST_CASE("studies are deterministic and seed dependent") {
  for (auto op : {Operator::kProduct, Operator::kFusion}) {
    for (auto start : {Start::kOpinion, Start::kPdf}) {
      auto cfg = small_config(op, start);
      const auto a = run_quantitative(cfg);
      const auto b = run_quantitative(cfg);
      CHECK(records_csv(a) == records_csv(b));
      CHECK(aggregates_csv(a) == aggregates_csv(b));
      cfg.seed = 2;
      CHECK(records_csv(run_quantitative(cfg)) != records_csv(a));
    }
  }
}

TEST_CASE("repetitions do not depend on the repetition count") {
  auto cfg = small_config(Operator::kProduct, Start::kPdf);
  const auto four = run_quantitative(cfg);
  cfg.n_reps = 2;
  const auto two = run_quantitative(cfg);
  for (std::size_t i = 0; i < two.records.size(); ++i) {
    CHECK(two.records[i].distance == four.records[i].distance);
  }
}

TEST_CASE("multi-product study covers the factor range") {
  auto cfg = small_config(Operator::kProduct, Start::kOpinion);
  cfg.l_min = 2;
  cfg.l_max = 4;
  const auto s = run_multi_product(cfg);
  CHECK(s.diagnostics.size() == 3);
  std::set<std::size_t> ls;
  for (const auto& r : s.records) ls.insert(r.l_factors);
  CHECK(ls == std::set<std::size_t>{2, 3, 4});
  cfg.op = Operator::kFusion;
  CHECK(code_of([&] { run_multi_product(cfg); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("limit-case study uses the exact reference") {
  auto cfg = small_config(Operator::kProduct, Start::kOpinion);
  cfg.n_samples = {20000};
  const auto s = run_limit_case(cfg);
  CHECK(s.reference == "exact");
  std::set<std::string> labels;
  for (const auto& a : s.aggregates) labels.insert(a.approximant);
  CHECK(labels == std::set<std::string>{"kde", "sl", "beta_mc", "beta_an"});
  for (const auto& a : s.aggregates) {
    if (a.approximant == "sl") CHECK(a.mean == doctest::Approx(0.23).epsilon(0.3));
  }
  cfg.op = Operator::kFusion;
  CHECK(code_of([&] { run_limit_case(cfg); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("hopeless operand draws hit the redraw limit") {
  auto cfg = small_config(Operator::kProduct, Start::kPdf);
  cfg.w = MappingConstant(50.0);  // alpha + beta never reaches W
  CHECK(code_of([&] { run_quantitative(cfg); }) == ErrorCode::kRedrawLimit);
}

TEST_CASE("qualitative density table") {
  auto cfg = small_config(Operator::kProduct, Start::kOpinion);
  cfg.m_integration = 50;
  cfg.operands = {BinomialOpinion{0.61, 0.30, 0.09, 0.79}, BinomialOpinion{0.28, 0.66, 0.06, 0.46}};
  const auto t = run_qualitative(cfg);
  CHECK(t.grid.size() == 50);
  CHECK(t.grid.front() == doctest::Approx(cfg.eps_clamp));
  CHECK(t.grid.back() == doctest::Approx(1.0 - cfg.eps_clamp));
  CHECK(t.z.b == doctest::Approx(0.193240904807));
  REQUIRE(t.beta_an.has_value());
  std::ostringstream os;
  write_density_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "z,kde,sl,gauss_mc,beta_mc,gauss_an,beta_an");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == 50);
}

TEST_CASE("qualitative fusion leaves analytic columns empty") {
  auto cfg = small_config(Operator::kFusion, Start::kOpinion);
  cfg.m_integration = 10;
  const auto t = run_qualitative(cfg);
  CHECK(!t.gauss_an.has_value());
  std::ostringstream os;
  write_density_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.substr(line.size() - 2) == ",,");
  CHECK(t.x.a == t.y.a);
}

TEST_CASE("csv and json writers") {
  const auto s = run_quantitative(small_config(Operator::kProduct, Start::kOpinion));
  const auto agg = aggregates_csv(s);
  CHECK(agg.rfind("operator,start,n_samples,l_factors,approximant,mean,std,reps,rejections,bias_gate_ok\n", 0) == 0);
  const auto rec = records_csv(s);
  CHECK(rec.rfind("operator,start,n_samples,l_factors,rep,approximant,distance,stderr\n", 0) == 0);
  CHECK(rec.find("product,opinion,2000,2,0,sl,") != std::string::npos);
  std::ostringstream js;
  write_study_json(js, s);
  CHECK(js.str().find("\"std_note\"") != std::string::npos);
  CHECK(js.str().find("\"aggregates\"") != std::string::npos);
}

TEST_CASE("error code names are stable") {
  CHECK(error_code_name(ErrorCode::kPriorMismatch) == "prior_mismatch");
  CHECK(error_code_name(ErrorCode::kRedrawLimit) == "redraw_limit");
  CHECK(error_code_name(ErrorCode::kInvalidConfig) == "invalid_config");
}
