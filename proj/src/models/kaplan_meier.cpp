#include <algorithm>
#include <stdexcept>

#include "cosarc/models.hpp"

namespace cosarc {

double KMCurve::survival(double t) const {
  // Right-continuous: the drop at an event time is included at that time.
  const auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
  if (it == event_times.begin()) return 1.0;
  return surv[static_cast<std::size_t>(it - event_times.begin()) - 1];
}

KMCurve product_limit(std::vector<std::pair<double, bool>> obs) {
  if (obs.empty()) throw std::invalid_argument("Kaplan-Meier needs at least one observation");
  std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  KMCurve curve;
  curve.last_time = obs.back().first;
  double s = 1.0;
  std::size_t at_risk = obs.size();
  std::size_t i = 0;
  while (i < obs.size()) {
    const double t = obs[i].first;
    std::size_t deaths = 0;
    std::size_t removed = 0;
    while (i < obs.size() && obs[i].first == t) {
      deaths += obs[i].second ? 1 : 0;
      ++removed;
      ++i;
    }
    if (deaths > 0) {
      s *= 1.0 - static_cast<double>(deaths) / static_cast<double>(at_risk);
      curve.event_times.push_back(t);
      curve.surv.push_back(s);
    }
    at_risk -= removed;
  }
  return curve;
}

KMCurve fit_kaplan_meier(const Dataset& data) {
  std::vector<std::pair<double, bool>> obs;
  obs.reserve(data.size());
  for (const auto& r : data) obs.emplace_back(r.t_tilde, r.event);
  return product_limit(std::move(obs));
}

}  // namespace cosarc
