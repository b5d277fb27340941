#include "cosarc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cosarc/quantile.hpp"

namespace cosarc {

double uncalibrated_lpb(const ConditionalModel& surv, double alpha, CovariateView x_test) {
  return surv.quantile(x_test, alpha);
}

double oracle_lpb(const SettingSpec& setting, double alpha, CovariateView x_test) {
  return oracle_quantile(setting, x_test, alpha);
}

SplitConformalPredictor::SplitConformalPredictor(const Dataset& data, std::span<const double> targets,
                                                 ConditionalModel surv, double alpha)
    : surv_(std::move(surv)), alpha_(alpha) {
  if (data.empty()) throw std::invalid_argument("split conformal: empty calibration set");
  if (targets.size() != data.size()) throw std::invalid_argument("split conformal: one target per record needed");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  std::vector<double> scores;
  scores.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) scores.push_back(surv_.quantile(data[i].x, alpha) - targets[i]);
  const std::vector<double> ones(scores.size(), 1.0);
  eta_ = weighted_quantile(DiscreteDistribution::weighted_scores(scores, ones, 1.0), 1.0 - alpha);
}

double SplitConformalPredictor::lpb(CovariateView x) const {
  if (eta_ == kInfinity) return 0.0;
  return std::max(0.0, surv_.quantile(x, alpha_) - eta_);
}

SplitConformalPredictor naive_cqr(const Dataset& data, const ConditionalModel& surv, double alpha) {
  std::vector<double> targets;
  targets.reserve(data.size());
  for (const auto& r : data) targets.push_back(r.t_tilde);
  return SplitConformalPredictor(data, targets, surv, alpha);
}

double naive_cqr_lpb(const Dataset& data, const ConditionalModel& surv, double alpha, CovariateView x_test) {
  return naive_cqr(data, surv, alpha).lpb(x_test);
}

double sample_conditional_km(const KMCurve& km, double c, RandomStream& stream, bool* degenerate) {
  const double u = stream.uniform();
  const double beyond = std::max(km.last_time, std::nextafter(c, kInfinity));
  const double s_c = km.survival(c);
  if (degenerate) *degenerate = !(s_c > 0.0);
  if (!(s_c > 0.0)) return beyond;
  // Smallest knot t > c with S(t) <= S(c) * (1 - u), i.e. conditional CDF >= u.
  const double target = s_c * (1.0 - u);
  const auto first = std::upper_bound(km.event_times.begin(), km.event_times.end(), c);
  for (auto it = first; it != km.event_times.end(); ++it) {
    const auto j = static_cast<std::size_t>(it - km.event_times.begin());
    if (km.surv[j] <= target) return *it;
  }
  return beyond;
}

std::vector<double> km_decensored_times(const Dataset& data, const RandomStream& stream,
                                        DecensorDiagnostics* diagnostics) {
  std::vector<double> out;
  out.reserve(data.size());
  bool any_censored = false;
  for (const auto& r : data) any_censored |= !r.event;
  if (!any_censored) {
    for (const auto& r : data) out.push_back(r.t_tilde);
    return out;
  }
  const KMCurve km = fit_kaplan_meier(data);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data[i];
    if (r.event) {
      out.push_back(r.t_tilde);
      continue;
    }
    RandomStream s = stream.substream(i);
    bool degenerate = false;
    out.push_back(sample_conditional_km(km, r.t_tilde, s, &degenerate));
    if (diagnostics) {
      ++diagnostics->sampled;
      if (degenerate) ++diagnostics->degenerate;
    }
  }
  return out;
}

SplitConformalPredictor km_decensor(const Dataset& data, const ConditionalModel& surv, double alpha,
                                    const RandomStream& stream, DecensorDiagnostics* diagnostics) {
  const auto targets = km_decensored_times(data, stream, diagnostics);
  return SplitConformalPredictor(data, targets, surv, alpha);
}

double km_decensor_lpb(const Dataset& data, const ConditionalModel& surv, double alpha, CovariateView x_test,
                       const RandomStream& stream) {
  return km_decensor(data, surv, alpha, stream).lpb(x_test);
}

}  // namespace cosarc
