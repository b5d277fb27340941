#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cosarc/conditional_model.hpp"
#include "cosarc/dataset.hpp"
#include "cosarc/impute.hpp"

namespace cosarc {

inline constexpr double kDefaultWeightFloor = 0.02;
inline constexpr double kBreakpointTolerance = 1e-8;

struct CalibrationDiagnostics {
  std::size_t calibration_size = 0;
  std::size_t filtered_count = 0;  // fixed cutoff: records with c_hat >= c0
  bool empty_filter = false;
  double a_hat = 0.0;              // adaptive: selected candidate index
  std::size_t grid_size = 0;
  std::size_t weight_floor_hits = 0;
  std::size_t plateau_count = 0;   // calibration quantiles that hit a KM plateau
};

/// Lower median of the observed censoring times. Throws "cannot tune c0"
/// when no record is censored.
double default_cutoff(const Dataset& data);

double dr_adjust(double preliminary, double q_alpha_uncalibrated);

// ---------------------------------------------------------------------------
// Fixed cutoff

struct FixedCutoffCalibrator {
  double c0 = 1.0;
  double alpha = 0.1;
  ConditionalModel surv;
  ConditionalModel cens;
  double weight_floor = kDefaultWeightFloor;
};

/// Weighted split-conformal bound on the records with c_hat >= c0, with
/// scores q_alpha(X_i) - min(T~_i, c0) and weights 1 / P^(C > c0 | X_i).
class FixedCutoffPredictor {
 public:
  FixedCutoffPredictor(const ImputedDataset& imputed, FixedCutoffCalibrator cal);

  // Calibrated score quantile for a test point; may be +inf.
  double eta(CovariateView x) const;
  // (q_alpha(x) - eta) capped at c0 and floored at 0; 0 when eta is +inf or
  // the filtered set is empty.
  double preliminary(CovariateView x) const;
  double lpb(CovariateView x) const;

  const CalibrationDiagnostics& diagnostics() const { return diag_; }
  std::span<const double> scores() const { return scores_; }
  std::span<const double> weights() const { return weights_; }

 private:
  double weight_at(const ConditionalDistribution& cens_law) const;

  FixedCutoffCalibrator cal_;
  std::vector<double> scores_;   // ascending
  std::vector<double> weights_;  // aligned with scores_
  CalibrationDiagnostics diag_;
};

double fixed_cutoff_lpb(const ImputedDataset& imputed, const FixedCutoffCalibrator& cal, CovariateView x_test);

// ---------------------------------------------------------------------------
// Adaptive cutoff

/// Candidate bounds f_a(x), nondecreasing in a on [0, 1] with f_0 = 0.
///   quantile_level: f_a(x) = q_a(x)
///   shift:          f_a(x) = max(0, q_alpha(x) - s) with s = (1 - a) / a,
///                   so a = 1 is q_alpha itself and a -> 0 shifts down to 0.
enum class CandidateFamily { quantile_level, shift };

std::string_view to_string(CandidateFamily family);
CandidateFamily parse_candidate_family(std::string_view name);

struct AdaptiveCalibrator {
  double alpha = 0.1;
  ConditionalModel surv;
  ConditionalModel cens;
  CandidateFamily family = CandidateFamily::quantile_level;
  double weight_floor = kDefaultWeightFloor;
};

/// One calibration record with its fitted laws evaluated once.
struct CalibrationPoint {
  ConditionalDistribution surv;
  ConditionalDistribution cens;
  double q_alpha = 0.0;
  double t_tilde = 0.0;
  double c_hat = 0.0;
};

std::vector<CalibrationPoint> prepare_points(const ImputedDataset& imputed, const ConditionalModel& surv,
                                             const ConditionalModel& cens, double alpha,
                                             std::size_t* plateau_count = nullptr);

double candidate_bound(const ConditionalDistribution& surv, double q_alpha, CandidateFamily family, double a);

// alpha^(a): weighted share of usable points (f_a <= C') that are miscovered
// (T~ < f_a). An empty denominator counts as certain miscoverage (1).
double miscoverage_hat(double a, std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal,
                       std::size_t* floor_hits = nullptr);

// sup{a : f_a(X_i) <= bound} by bisection on [0, 1]; the returned a always
// satisfies the inequality.
double breakpoint(const CalibrationPoint& point, CandidateFamily family, double bound);

// Sorted unique {abar_i} U {atilde_i} U {0}.
std::vector<double> breakpoint_grid(std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal);

// Last grid point at which the running maximum of the miscoverage estimates
// is still <= alpha; 0 when there is none. grid must be ascending.
double select_running_sup(std::span<const double> grid, std::span<const double> miscoverage, double alpha);

double select_threshold(std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal,
                        std::span<const double> grid, std::size_t* floor_hits = nullptr);

class AdaptivePredictor {
 public:
  AdaptivePredictor(const ImputedDataset& imputed, AdaptiveCalibrator cal);

  double a_hat() const { return diag_.a_hat; }
  double preliminary(CovariateView x) const;
  double lpb(CovariateView x) const;
  const CalibrationDiagnostics& diagnostics() const { return diag_; }

 private:
  AdaptiveCalibrator cal_;
  CalibrationDiagnostics diag_;
};

double adaptive_lpb(const ImputedDataset& imputed, const AdaptiveCalibrator& cal, CovariateView x_test);

}  // namespace cosarc
