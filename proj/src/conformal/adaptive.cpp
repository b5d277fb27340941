#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cosarc/conformal.hpp"
#include "cosarc/normal.hpp"

namespace cosarc {

namespace {

// Candidate evaluation with the standard normal quantile of `a` computed once
// per grid point; lognormal laws then need no further inversion.
struct Level {
  double a;
  double z;
  explicit Level(double a_) : a(a_), z(a_ > 0.0 && a_ < 1.0 ? normal_quantile(a_) : 0.0) {}
};

double candidate(const ConditionalDistribution& surv, double q_alpha, CandidateFamily family, const Level& level) {
  const double a = level.a;
  if (a <= 0.0) return 0.0;
  if (family == CandidateFamily::shift) {
    const double s = (1.0 - a) / a;
    return std::max(0.0, q_alpha - s);
  }
  if (const auto* l = std::get_if<ConditionalDistribution::Lognormal>(&surv.law())) {
    if (l->sigma == 0.0) return std::exp(l->mu);
    if (a >= 1.0) return kInfinity;
    return std::exp(l->mu + l->sigma * level.z);
  }
  return surv.quantile(a);
}

void validate(const AdaptiveCalibrator& cal) {
  if (!(cal.alpha > 0.0 && cal.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(cal.weight_floor > 0.0 && cal.weight_floor < 0.5)) {
    throw std::invalid_argument("weight floor must lie in (0, 0.5)");
  }
}

}  // namespace

std::string_view to_string(CandidateFamily family) {
  return family == CandidateFamily::quantile_level ? "quantile-level" : "shift";
}

CandidateFamily parse_candidate_family(std::string_view name) {
  if (name == "quantile-level") return CandidateFamily::quantile_level;
  if (name == "shift") return CandidateFamily::shift;
  throw std::invalid_argument("unknown candidate family '" + std::string(name) + "' (expected quantile-level, shift)");
}

std::vector<CalibrationPoint> prepare_points(const ImputedDataset& imputed, const ConditionalModel& surv,
                                             const ConditionalModel& cens, double alpha, std::size_t* plateau_count) {
  std::vector<CalibrationPoint> points;
  points.reserve(imputed.size());
  for (const auto& r : imputed) {
    ConditionalDistribution s = surv.at(r.x);
    const auto q = s.quantile_checked(alpha);
    if (q.plateau && plateau_count) ++*plateau_count;
    points.push_back({std::move(s), cens.at(r.x), q.time, r.t_tilde, r.c_hat});
  }
  return points;
}

double candidate_bound(const ConditionalDistribution& surv, double q_alpha, CandidateFamily family, double a) {
  return candidate(surv, q_alpha, family, Level(a));
}

namespace {

double miscoverage_at(const Level& level, std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal,
                      std::size_t* floor_hits) {
  double num = 0.0, den = 0.0;
  for (const auto& pt : points) {
    const double f = candidate(pt.surv, pt.q_alpha, cal.family, level);
    if (!(f <= pt.c_hat)) continue;
    const double c = pt.cens.survival(f);
    if (c < cal.weight_floor && floor_hits) ++*floor_hits;
    const double w = 1.0 / std::max(cal.weight_floor, c);
    den += w;
    if (pt.t_tilde < f) num += w;
  }
  return den > 0.0 ? num / den : 1.0;
}

}  // namespace

double miscoverage_hat(double a, std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal,
                       std::size_t* floor_hits) {
  return miscoverage_at(Level(a), points, cal, floor_hits);
}

double breakpoint(const CalibrationPoint& point, CandidateFamily family, double bound) {
  auto ok = [&](double a) { return candidate_bound(point.surv, point.q_alpha, family, a) <= bound; };
  if (ok(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kBreakpointTolerance) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<double> breakpoint_grid(std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal) {
  std::vector<double> grid{0.0};
  grid.reserve(2 * points.size() + 1);
  for (const auto& pt : points) {
    grid.push_back(breakpoint(pt, cal.family, pt.t_tilde));
    grid.push_back(breakpoint(pt, cal.family, pt.c_hat));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double select_running_sup(std::span<const double> grid, std::span<const double> miscoverage, double alpha) {
  if (grid.size() != miscoverage.size()) throw std::invalid_argument("grid and estimates differ in length");
  double a_hat = 0.0;
  double running = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    running = std::max(running, miscoverage[k]);
    if (running > alpha) break;
    a_hat = grid[k];
  }
  return a_hat;
}

double select_threshold(std::span<const CalibrationPoint> points, const AdaptiveCalibrator& cal,
                        std::span<const double> grid, std::size_t* floor_hits) {
  // Equivalent to select_running_sup over the full grid, stopping at the
  // first violation.
  double a_hat = 0.0;
  for (double a : grid) {
    if (miscoverage_at(Level(a), points, cal, floor_hits) > cal.alpha) break;
    a_hat = a;
  }
  return a_hat;
}

AdaptivePredictor::AdaptivePredictor(const ImputedDataset& imputed, AdaptiveCalibrator cal) : cal_(std::move(cal)) {
  validate(cal_);
  diag_.calibration_size = imputed.size();
  const auto points = prepare_points(imputed, cal_.surv, cal_.cens, cal_.alpha, &diag_.plateau_count);
  const auto grid = breakpoint_grid(points, cal_);
  diag_.grid_size = grid.size();
  diag_.a_hat = select_threshold(points, cal_, grid, &diag_.weight_floor_hits);
}

double AdaptivePredictor::preliminary(CovariateView x) const {
  const ConditionalDistribution s = cal_.surv.at(x);
  const double q = cal_.family == CandidateFamily::shift ? s.quantile(cal_.alpha) : 0.0;
  return candidate_bound(s, q, cal_.family, diag_.a_hat);
}

double AdaptivePredictor::lpb(CovariateView x) const {
  return dr_adjust(preliminary(x), cal_.surv.quantile(x, cal_.alpha));
}

double adaptive_lpb(const ImputedDataset& imputed, const AdaptiveCalibrator& cal, CovariateView x_test) {
  return AdaptivePredictor(imputed, cal).preliminary(x_test);
}

}  // namespace cosarc
