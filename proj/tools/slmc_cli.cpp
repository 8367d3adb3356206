#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "slmc/error.hpp"
#include "slmc/experiments.hpp"

namespace {

using slmc::Error;
using slmc::ErrorCode;

struct Options {
  std::string op = "product";
  std::string start = "opinion";
  std::string samples;
  std::size_t reps = 100;
  std::size_t grid = slmc::kDefaultIntegrationPoints;
  std::string factors = "2..5";
  std::uint64_t seed = 1;
  double eps = slmc::kDefaultEpsClamp;
  std::string out;
  std::string format = "csv";
  std::string fusion_variance = "matched";
  std::string integration = "sampled";
  std::vector<std::string> operands;
};

std::size_t parse_count(const std::string& text) {
  // Accepts plain integers and forms like 1e4.
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 1.0) || v != std::floor(v) || v > 1e12) {
    throw Error(ErrorCode::kInvalidConfig, "not a positive integer: '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

slmc::BinomialOpinion parse_opinion(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw Error(ErrorCode::kInvalidConfig, "an opinion is 'b,d,u,a', got '" + text + "'");
  }
  double v[4];
  for (int i = 0; i < 4; ++i) {
    try {
      v[i] = std::stod(parts[i]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "bad number in opinion '" + text + "'");
    }
  }
  return {v[0], v[1], v[2], v[3]};
}

slmc::ExperimentConfig build_config(const Options& o) {
  slmc::ExperimentConfig cfg;
  cfg.op = o.op == "fusion" ? slmc::Operator::kFusion : slmc::Operator::kProduct;
  cfg.start = o.start == "pdf" ? slmc::Start::kPdf : slmc::Start::kOpinion;
  if (!o.samples.empty()) {
    for (const auto& s : split(o.samples, ',')) cfg.n_samples.push_back(parse_count(s));
  }
  cfg.n_reps = o.reps;
  cfg.m_integration = o.grid;
  const auto dots = o.factors.find("..");
  if (dots == std::string::npos) {
    cfg.l_min = cfg.l_max = parse_count(o.factors);
  } else {
    cfg.l_min = parse_count(o.factors.substr(0, dots));
    cfg.l_max = parse_count(o.factors.substr(dots + 2));
  }
  cfg.seed = o.seed;
  cfg.eps_clamp = o.eps;
  cfg.fusion_term = o.fusion_variance == "printed" ? slmc::FusionVarianceTerm::kAsPrinted
                                                   : slmc::FusionVarianceTerm::kMomentMatched;
  cfg.integration_mode =
      o.integration == "grid" ? slmc::IntegrationMode::kGrid : slmc::IntegrationMode::kSampled;
  if (!o.operands.empty()) {
    cfg.operands = {parse_opinion(o.operands[0]), parse_opinion(o.operands[1])};
  }
  cfg.validate();
  return cfg;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return f;
}

void check_written(std::ostream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

// foo.csv -> foo.records.csv
std::filesystem::path records_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_filename(out.stem().string() + ".records" + out.extension().string());
  return p;
}

void emit_table(const Options& o, const slmc::DensityTable& t) {
  auto write = [&](std::ostream& os) {
    if (o.format == "json") {
      slmc::write_density_json(os, t);
    } else {
      slmc::write_density_csv(os, t);
    }
  };
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  auto f = open_output(o.out);
  write(f);
  check_written(f, o.out);
}

void emit_study(const Options& o, const slmc::DistanceStudy& study) {
  if (o.format == "json") {
    if (o.out.empty()) {
      slmc::write_study_json(std::cout, study);
      return;
    }
    auto f = open_output(o.out);
    slmc::write_study_json(f, study);
    check_written(f, o.out);
    return;
  }
  if (o.out.empty()) {
    slmc::write_aggregates_csv(std::cout, study.aggregates);
    return;
  }
  auto f = open_output(o.out);
  slmc::write_aggregates_csv(f, study.aggregates);
  check_written(f, o.out);
  const auto rp = records_path(o.out);
  auto r = open_output(rp);
  slmc::write_records_csv(r, study.records);
  check_written(r, rp);
}

void report_diagnostics(const slmc::DistanceStudy& study) {
  for (const auto& d : study.diagnostics) {
    if (d.failed_reps > 0 || d.bias_gate_violations > 0 || d.kde_self_nonzero > 0) {
      nlohmann::ordered_json j{{"warning", "diagnostics"},
                               {"n_samples", d.n_samples},
                               {"l_factors", d.l_factors},
                               {"failed_reps", d.failed_reps},
                               {"bias_gate_violations", d.bias_gate_violations},
                               {"kde_self_nonzero", d.kde_self_nonzero}};
      std::cerr << j.dump() << '\n';
    }
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--operator", o.op, "Operator")->check(CLI::IsMember({"product", "fusion"}));
  cmd->add_option("--start", o.start, "Operand starting point")
      ->check(CLI::IsMember({"opinion", "pdf"}));
  cmd->add_option("--samples", o.samples, "Sample count N, or a comma-separated ladder");
  cmd->add_option("--reps", o.reps, "Repetitions per sweep point");
  cmd->add_option("--grid", o.grid, "Integration points (grid size for qualitative)");
  cmd->add_option("--factors", o.factors, "Factor range Lmin..Lmax (multi-product)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--eps", o.eps, "Boundary clamp");
  cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--fusion-variance", o.fusion_variance, "Fusion spread term")
      ->check(CLI::IsMember({"matched", "printed"}));
  cmd->add_option("--integration", o.integration, "Integration points: sampled or grid")
      ->check(CLI::IsMember({"sampled", "grid"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subjective-logic vs Monte Carlo density comparison harness"};
  app.require_subcommand(1);
  Options o;
  auto* qual = app.add_subcommand("qualitative", "Density table for one operand pair");
  auto* quant = app.add_subcommand("quantitative", "Distances over an N ladder");
  auto* limit = app.add_subcommand("limit-case", "Product of two uniforms vs the exact density");
  auto* multi = app.add_subcommand("multi-product", "Distances for products of L factors");
  for (auto* cmd : {qual, quant, limit, multi}) add_common(cmd, o);
  qual->add_option("--operands", o.operands, "Fixed operands: two opinions written b,d,u,a")
      ->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto cfg = build_config(o);
    if (qual->parsed()) {
      emit_table(o, slmc::run_qualitative(cfg));
    } else {
      if (!o.operands.empty()) throw Error(ErrorCode::kInvalidConfig, "--operands is qualitative only");
      slmc::DistanceStudy study;
      if (quant->parsed()) study = slmc::run_quantitative(cfg);
      if (limit->parsed()) study = slmc::run_limit_case(cfg);
      if (multi->parsed()) study = slmc::run_multi_product(cfg);
      emit_study(o, study);
      report_diagnostics(study);
    }
  } catch (const Error& e) {
    nlohmann::ordered_json j{{"error", slmc::error_code_name(e.code())}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    nlohmann::ordered_json j{{"error", "internal"}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 3;
  }
  return 0;
}
