#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "slmc/distance.hpp"
#include "slmc/opinion.hpp"

namespace slmc {

enum class Operator { kProduct, kFusion };
enum class Start { kOpinion, kPdf };

std::string_view to_string(Operator op) noexcept;
std::string_view to_string(Start start) noexcept;

struct ExperimentConfig {
  Operator op = Operator::kProduct;
  Start start = Start::kOpinion;
  /// Sample counts to sweep. Empty means the protocol's own default.
  std::vector<std::size_t> n_samples;
  std::size_t n_reps = 100;
  std::size_t m_integration = kDefaultIntegrationPoints;
  std::size_t l_min = 2;
  std::size_t l_max = 5;
  std::uint64_t seed = 1;
  double eps_clamp = kDefaultEpsClamp;
  MappingConstant w{};
  FusionVarianceTerm fusion_term = FusionVarianceTerm::kMomentMatched;
  IntegrationMode integration_mode = IntegrationMode::kSampled;
  /// Fixed operands for the qualitative protocol.
  std::optional<std::pair<BinomialOpinion, BinomialOpinion>> operands;

  /// Throws kInvalidConfig naming the first violated invariant.
  void validate() const;
};

/// Default sample ladders per protocol.
inline const std::vector<std::size_t> kQuantitativeLadder = {1'000, 10'000, 100'000};
inline constexpr std::size_t kQualitativeSamples = 100'000;
inline constexpr std::size_t kLimitCaseSamples = 1'000'000;
inline constexpr std::size_t kMultiProductSamples = 100'000;

/// Approximant labels as they appear in output files.
namespace label {
inline constexpr const char* kKde = "kde";
inline constexpr const char* kSl = "sl";
inline constexpr const char* kGaussMc = "gauss_mc";
inline constexpr const char* kBetaMc = "beta_mc";
inline constexpr const char* kGaussAn = "gauss_an";
inline constexpr const char* kBetaAn = "beta_an";
}  // namespace label

struct RunRecord {
  Operator op = Operator::kProduct;
  Start start = Start::kOpinion;
  std::size_t n_samples = 0;
  std::size_t l_factors = 2;
  std::size_t rep = 0;
  std::string approximant;
  double distance = 0.0;
  double std_error = 0.0;
};

struct AggregateStat {
  Operator op = Operator::kProduct;
  Start start = Start::kOpinion;
  std::size_t n_samples = 0;
  std::size_t l_factors = 2;
  std::string approximant;
  double mean = 0.0;
  /// Sample std across repetitions (divisor reps - 1); 0 for a single repetition.
  double std = 0.0;
  std::size_t reps = 0;
  bool single_rep = false;
  /// Draws discarded in this group: operand rejections plus failed repetitions.
  std::size_t rejections = 0;
  bool bias_gate_ok = true;
};

/// Groups by (operator, start, n_samples, l_factors, approximant) in that sort
/// order; throws kEmptyInput on an empty list.
std::vector<AggregateStat> aggregate_stats(const std::vector<RunRecord>& records);

/// Bookkeeping for one (n_samples, l_factors) sweep point.
struct GroupDiagnostics {
  std::size_t n_samples = 0;
  std::size_t l_factors = 2;
  std::size_t operand_rejections = 0;
  std::size_t failed_reps = 0;
  /// Repetitions where kde_bias_bound(n) exceeded 1% of their smallest distance.
  std::size_t bias_gate_violations = 0;
  /// Repetitions where the KDE-to-itself distance was not exactly zero.
  std::size_t kde_self_nonzero = 0;
  double bias_bound = 0.0;
  std::vector<std::string> failures;
};

struct DistanceStudy {
  std::string protocol;
  std::string reference;  // "kde" or "exact"
  ExperimentConfig config;
  std::vector<RunRecord> records;
  std::vector<AggregateStat> aggregates;
  std::vector<GroupDiagnostics> diagnostics;
};

struct DensityTable {
  Operator op = Operator::kProduct;
  BinomialOpinion x, y, z;
  BetaParams px, py;
  std::size_t n_samples = 0;
  std::size_t fusion_resampled = 0;
  std::vector<double> grid;
  std::vector<double> kde, sl, gauss_mc, beta_mc;
  /// Present for the product operator only.
  std::optional<std::vector<double>> gauss_an, beta_an;
};

DensityTable run_qualitative(const ExperimentConfig& cfg);
DistanceStudy run_quantitative(const ExperimentConfig& cfg);
DistanceStudy run_limit_case(const ExperimentConfig& cfg);
DistanceStudy run_multi_product(const ExperimentConfig& cfg);

/// Output writers; every float is printed with 9 significant digits.
void write_density_csv(std::ostream& out, const DensityTable& table);
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_aggregates_csv(std::ostream& out, const std::vector<AggregateStat>& aggregates);
void write_density_json(std::ostream& out, const DensityTable& table);
void write_study_json(std::ostream& out, const DistanceStudy& study);

}  // namespace slmc
