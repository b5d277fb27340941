#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cosarc/conditional_model.hpp"
#include "cosarc/conformal.hpp"
#include "cosarc/dataset.hpp"
#include "cosarc/impute.hpp"
#include "cosarc/metrics.hpp"
#include "cosarc/random.hpp"
#include "cosarc/synthdata.hpp"

namespace cosarc {

inline constexpr std::string_view kVersion = "0.3.0";

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Method { drcosarc_fixed, drcosarc_adaptive, uncalibrated, naive_cqr, km_decensor, oracle };
enum class SweepAxis { none, cens_train_size, train_size, p1, n_cal };

std::string_view to_string(Method method);
std::string_view to_string(SweepAxis axis);
Method parse_method(std::string_view name);
SweepAxis parse_sweep_axis(std::string_view name);
const std::vector<Method>& all_methods();

struct ExperimentConfig {
  std::optional<int> setting;
  std::optional<std::string> dataset;

  std::size_t n_train = 1000;
  std::size_t n_cal = 1000;
  std::size_t n_test = 1000;
  double split_train = 0.6;  // real data only
  double split_cal = 0.2;

  ModelSpec survival{ModelFamily::lognormal_aft, 0, 0};
  ModelSpec censoring{ModelFamily::knn_km, 0, 0};  // mask 0: min(p, 10)
  bool true_survival_model = false;   // synthetic only: use the exact T | X law
  bool true_censoring_model = false;  // synthetic only: use the exact C | X law

  std::vector<Method> methods = all_methods();
  double alpha = 0.1;
  std::size_t reps = 10;
  std::uint64_t seed = 1;

  SweepAxis sweep = SweepAxis::none;
  std::vector<double> grid;

  CandidateFamily candidate_family = CandidateFamily::quantile_level;
  double weight_floor = kDefaultWeightFloor;
  std::optional<double> c0;  // default: lower median of calibration censoring times

  std::size_t threads = 0;  // 0: hardware concurrency
  double failure_threshold = 0.5;
  bool keep_lpbs = false;   // retain per-point bounds in the report
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

// Throws ConfigError. p is the covariate dimension of the data source.
void validate(const ExperimentConfig& config, std::size_t p);

// ---------------------------------------------------------------------------
// Running one calibration method on a test set

struct MethodContext {
  const ConditionalModel* surv = nullptr;
  const ConditionalModel* cens = nullptr;
  const Dataset* calibration = nullptr;
  const ImputedDataset* imputed = nullptr;
  const SettingSpec* setting = nullptr;
  double alpha = 0.1;
  CandidateFamily candidate_family = CandidateFamily::quantile_level;
  double weight_floor = kDefaultWeightFloor;
  std::optional<double> c0;
  RandomStream km_stream{0};
};

struct MethodOutput {
  std::vector<double> lpbs;
  std::vector<double> q_alpha;     // uncalibrated model quantile per test point (empty for oracle)
  std::size_t dr_active = 0;       // points where min(L', q_alpha) took q_alpha
  CalibrationDiagnostics diagnostics;
};

MethodOutput run_method(Method method, const MethodContext& context, const Dataset& test);

// ---------------------------------------------------------------------------
// Monte Carlo harness

struct ResultRow {
  double grid = 0.0;
  std::size_t rep = 0;
  Method method = Method::oracle;
  std::string status = "ok";  // "ok" or "failed: <reason>"
  std::optional<double> coverage;  // true-T coverage, synthetic only
  CoverageBounds bounds;
  std::optional<double> normalized_lpb;  // synthetic only
  double mean_lpb = 0.0;
  std::optional<double> dr_active_frac;  // DR-COSARC methods only
  double runtime_ms = 0.0;
  std::vector<double> lpbs;      // with keep_lpbs
  std::vector<double> q_alpha;   // with keep_lpbs
  std::vector<double> true_times;  // with keep_lpbs, synthetic only

  bool ok() const { return status == "ok"; }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ResultRow> rows;  // ordered by (grid point, rep, method)
  std::size_t failed_reps = 0;  // (grid point, rep) pairs whose model fits failed
  std::size_t total_reps = 0;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Reporting

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);

// Per (grid point, method) aggregates: mean and 2 * SE over successful reps.
nlohmann::json summarize(const std::vector<ResultRow>& rows);
nlohmann::json summary_json(const ExperimentReport& report);

void write_report(const std::filesystem::path& directory, const ExperimentReport& report);

}  // namespace cosarc
