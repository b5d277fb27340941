#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cosarc/dataset.hpp"

namespace cosarc {

/// Raised when a model cannot be fitted. Carries the last optimizer iterate
/// when the failure happened mid-optimization.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what, std::vector<double> last_iterate = {})
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

struct OptimizerReport {
  int iterations = 0;
  double gradient_norm = 0.0;
  double log_likelihood = 0.0;
};

// Fixed optimizer settings shared by the AFT and Cox fitters.
inline constexpr double kGradientTolerance = 1e-8;
inline constexpr int kMaxNewtonIterations = 200;

// ---------------------------------------------------------------------------
// Kaplan-Meier

/// Product-limit curve. surv[j] is S just after event_times[j]; S = 1 before
/// the first event time. last_time is the largest observed time (event or not).
struct KMCurve {
  std::vector<double> event_times;
  std::vector<double> surv;
  double last_time = 0.0;

  double survival(double t) const;
};

KMCurve fit_kaplan_meier(const Dataset& data);
KMCurve product_limit(std::vector<std::pair<double, bool>> observations);

// ---------------------------------------------------------------------------
// Lognormal accelerated failure time

/// log T | X = x ~ Normal(intercept + beta . x, sigma^2).
struct AFTModel {
  double intercept = 0.0;
  std::vector<double> beta;
  double sigma = 1.0;
  OptimizerReport report;
};

/// Censored maximum likelihood by damped Newton on (intercept, beta, log sigma).
AFTModel fit_lognormal_aft(const Dataset& data);

namespace aft {
// theta = (intercept, beta_1..beta_p, log sigma)
double log_likelihood(const Dataset& data, std::span<const double> theta);
std::vector<double> gradient(const Dataset& data, std::span<const double> theta);
}  // namespace aft

// ---------------------------------------------------------------------------
// Cox proportional hazards

/// Breslow fit. knot_times are the distinct event times and cumulative_hazard
/// the Breslow baseline H0 at each knot. H0 is evaluated as the linear
/// interpolant through (0, 0) and the knots, continued past the last knot at
/// the average rate H0(t_k) / t_k, so every conditional law has a density.
struct CoxModel {
  std::vector<double> beta;
  std::vector<double> knot_times;
  std::vector<double> cumulative_hazard;
  OptimizerReport report;

  double baseline_cumhaz(double t) const;
  double baseline_hazard(double t) const;
  // Smallest t with baseline_cumhaz(t) >= h.
  double inverse_cumhaz(double h) const;
};

/// Newton with step halving on the Breslow partial likelihood. Columns with
/// zero variance get coefficient 0.
CoxModel fit_cox(const Dataset& data);

namespace cox {
double partial_log_likelihood(const Dataset& data, std::span<const double> beta);
std::vector<double> score(const Dataset& data, std::span<const double> beta);
}  // namespace cox

// ---------------------------------------------------------------------------
// k-nearest-neighbour Kaplan-Meier

/// Conditional survival at x is the product-limit curve of the k training
/// points closest to x in standardized Euclidean distance. Points tied with
/// the k-th distance are all kept.
struct KnnKMModel {
  std::size_t p = 0;
  std::size_t k = 1;
  std::vector<double> means;
  std::vector<double> scales;
  std::vector<double> standardized;  // row-major, size() x p
  std::vector<double> times;
  std::vector<bool> events;

  std::size_t size() const { return times.size(); }
  std::vector<std::size_t> neighbors(CovariateView x) const;
  KMCurve neighborhood_curve(CovariateView x) const;
};

KnnKMModel fit_knn_km(const Dataset& data, std::size_t k);
std::size_t default_neighbor_count(std::size_t n);

// ---------------------------------------------------------------------------
// Closed-form laws (true data-generating distributions)

struct LawParams {
  enum class Kind { lognormal, exponential };
  Kind kind = Kind::lognormal;
  double mu = 0.0;
  double sigma = 1.0;
  double rate = 1.0;
};

struct AnalyticModel {
  std::string tag;
  std::size_t p = 0;
  std::function<LawParams(CovariateView)> law;
};

}  // namespace cosarc
