#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cosarc/conformal.hpp"
#include "cosarc/quantile.hpp"

namespace cosarc {

double default_cutoff(const Dataset& data) {
  std::vector<double> censored;
  for (const auto& r : data) {
    if (!r.event) censored.push_back(r.t_tilde);
  }
  if (censored.empty()) throw std::invalid_argument("cannot tune c0: no censored records");
  const auto mid = censored.begin() + static_cast<std::ptrdiff_t>((censored.size() - 1) / 2);
  std::nth_element(censored.begin(), mid, censored.end());
  return *mid;
}

double dr_adjust(double preliminary, double q_alpha_uncalibrated) {
  return std::min(preliminary, q_alpha_uncalibrated);
}

FixedCutoffPredictor::FixedCutoffPredictor(const ImputedDataset& imputed, FixedCutoffCalibrator cal)
    : cal_(std::move(cal)) {
  if (!(cal_.c0 > 0.0)) throw std::invalid_argument("fixed cutoff c0 must be positive");
  if (!(cal_.alpha > 0.0 && cal_.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(cal_.weight_floor > 0.0 && cal_.weight_floor < 0.5)) {
    throw std::invalid_argument("weight floor must lie in (0, 0.5)");
  }
  diag_.calibration_size = imputed.size();

  std::vector<double> scores, weights;
  for (const auto& r : imputed) {
    if (!(r.c_hat >= cal_.c0)) continue;
    const auto q = cal_.surv.at(r.x).quantile_checked(cal_.alpha);
    if (q.plateau) ++diag_.plateau_count;
    scores.push_back(q.time - std::min(r.t_tilde, cal_.c0));
    weights.push_back(weight_at(cal_.cens.at(r.x)));
    if (weights.back() == 1.0 / cal_.weight_floor) ++diag_.weight_floor_hits;
  }
  diag_.filtered_count = scores.size();
  diag_.empty_filter = scores.empty();

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  for (std::size_t i : order) {
    scores_.push_back(scores[i]);
    weights_.push_back(weights[i]);
  }
}

double FixedCutoffPredictor::weight_at(const ConditionalDistribution& cens_law) const {
  return 1.0 / std::max(cal_.weight_floor, cens_law.survival(cal_.c0));
}

double FixedCutoffPredictor::eta(CovariateView x) const {
  if (scores_.empty()) return kInfinity;
  const auto dist = DiscreteDistribution::weighted_scores(scores_, weights_, weight_at(cal_.cens.at(x)));
  return weighted_quantile(dist, 1.0 - cal_.alpha);
}

double FixedCutoffPredictor::preliminary(CovariateView x) const {
  const double e = eta(x);
  if (e == kInfinity) return 0.0;
  const double bound = std::min(cal_.surv.quantile(x, cal_.alpha) - e, cal_.c0);
  return std::max(bound, 0.0);
}

double FixedCutoffPredictor::lpb(CovariateView x) const {
  return dr_adjust(preliminary(x), cal_.surv.quantile(x, cal_.alpha));
}

double fixed_cutoff_lpb(const ImputedDataset& imputed, const FixedCutoffCalibrator& cal, CovariateView x_test) {
  return FixedCutoffPredictor(imputed, cal).preliminary(x_test);
}

}  // namespace cosarc
