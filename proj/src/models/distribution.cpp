#include "cosarc/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "cosarc/dataset.hpp"
#include "cosarc/normal.hpp"

namespace cosarc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Piecewise-linear CDF through (0, 0) and the knots, then an exponential tail.
struct LinearisedStep {
  const KMCurve& curve;

  double last_knot() const { return curve.event_times.empty() ? 0.0 : curve.event_times.back(); }
  double remaining() const { return curve.surv.empty() ? 1.0 : curve.surv.back(); }
  double tail_rate() const {
    const auto& t = curve.event_times;
    if (t.empty()) return curve.last_time > 0.0 ? 1.0 / curve.last_time : 1.0;
    const double spacing = t.size() == 1 ? t[0] : t[t.size() - 1] - t[t.size() - 2];
    return 1.0 / spacing;
  }

  // Segment j spans (t_{j-1}, t_j] with t_0 = 0 and S_0 = 1.
  double knot_time(std::size_t j) const { return j == 0 ? 0.0 : curve.event_times[j - 1]; }
  double knot_surv(std::size_t j) const { return j == 0 ? 1.0 : curve.surv[j - 1]; }

  double tail(double t) const {
    if (t <= 0.0) return 1.0;
    const auto& times = curve.event_times;
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end()) {
      const double s = remaining();
      return s == 0.0 ? 0.0 : s * std::exp(-tail_rate() * (t - last_knot()));
    }
    const auto j = static_cast<std::size_t>(it - times.begin()) + 1;
    const double t0 = knot_time(j - 1), t1 = knot_time(j);
    const double s0 = knot_surv(j - 1), s1 = knot_surv(j);
    return s0 + (s1 - s0) * (t - t0) / (t1 - t0);
  }

  double density(double t) const {
    if (t <= 0.0) return 0.0;
    const auto& times = curve.event_times;
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end()) {
      const double rate = tail_rate();
      return remaining() * rate * std::exp(-rate * (t - last_knot()));
    }
    const auto j = static_cast<std::size_t>(it - times.begin()) + 1;
    return (knot_surv(j - 1) - knot_surv(j)) / (knot_time(j) - knot_time(j - 1));
  }

  double inverse_tail(double mass) const {
    if (mass >= 1.0) return 0.0;
    const double s_last = remaining();
    if (mass < s_last || (mass == s_last && s_last > 0.0)) {
      if (mass <= 0.0) return kInfinity;
      return last_knot() + std::log(s_last / mass) / tail_rate();
    }
    // Linear part: first segment whose right end has dropped to `mass`.
    const auto& surv = curve.surv;
    const auto it = std::lower_bound(surv.begin(), surv.end(), mass, std::greater<>());
    const auto j = static_cast<std::size_t>(it - surv.begin()) + 1;
    const double t0 = knot_time(j - 1), t1 = knot_time(j);
    const double s0 = knot_surv(j - 1), s1 = knot_surv(j);
    return t0 + (s0 - mass) / (s0 - s1) * (t1 - t0);
  }
};

}  // namespace

double ConditionalDistribution::survival(double t) const {
  if (t <= 0.0) return 1.0;
  return std::visit(
      Overloaded{
          [t](const Lognormal& l) {
            if (l.sigma == 0.0) return t < std::exp(l.mu) ? 1.0 : 0.0;
            return normal_sf((std::log(t) - l.mu) / l.sigma);
          },
          [t](const Exponential& e) { return std::exp(-e.rate * t); },
          [t](const ProportionalHazards& ph) { return std::exp(-ph.model->baseline_cumhaz(t) * ph.risk); },
          [t](const Step& s) { return s.curve->survival(t); },
      },
      law_);
}

double ConditionalDistribution::density(double t) const {
  if (t <= 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [t](const Lognormal& l) {
            if (l.sigma == 0.0) return 0.0;
            return normal_pdf((std::log(t) - l.mu) / l.sigma) / (l.sigma * t);
          },
          [t](const Exponential& e) { return e.rate * std::exp(-e.rate * t); },
          [t](const ProportionalHazards& ph) {
            return ph.model->baseline_hazard(t) * ph.risk * std::exp(-ph.model->baseline_cumhaz(t) * ph.risk);
          },
          [t](const Step& s) { return LinearisedStep{*s.curve}.density(t); },
      },
      law_);
}

QuantileResult ConditionalDistribution::quantile_checked(double level) const {
  if (level <= 0.0) return {0.0, false};
  return std::visit(
      Overloaded{
          [level](const Lognormal& l) -> QuantileResult {
            if (l.sigma == 0.0) return {std::exp(l.mu), false};
            if (level >= 1.0) return {kInfinity, false};
            return {std::exp(l.mu + l.sigma * normal_quantile(level)), false};
          },
          [level](const Exponential& e) -> QuantileResult {
            if (level >= 1.0) return {kInfinity, false};
            return {-std::log1p(-level) / e.rate, false};
          },
          [level](const ProportionalHazards& ph) -> QuantileResult {
            if (level >= 1.0) return {kInfinity, false};
            return {ph.model->inverse_cumhaz(-std::log1p(-level) / ph.risk), false};
          },
          [level](const Step& s) -> QuantileResult {
            const auto& c = *s.curve;
            for (std::size_t j = 0; j < c.surv.size(); ++j) {
              if (1.0 - c.surv[j] >= level - 1e-12) return {c.event_times[j], false};
            }
            return {c.last_time, true};
          },
      },
      law_);
}

double ConditionalDistribution::tail(double t) const {
  if (const auto* s = std::get_if<Step>(&law_)) return LinearisedStep{*s->curve}.tail(t);
  return survival(t);
}

double ConditionalDistribution::inverse_tail(double mass) const {
  if (mass >= 1.0) return 0.0;
  return std::visit(
      Overloaded{
          [mass](const Lognormal& l) {
            if (l.sigma == 0.0) return std::exp(l.mu);
            if (mass <= 0.0) return kInfinity;
            return std::exp(l.mu + l.sigma * normal_upper_quantile(mass));
          },
          [mass](const Exponential& e) { return mass <= 0.0 ? kInfinity : -std::log(mass) / e.rate; },
          [mass](const ProportionalHazards& ph) {
            return mass <= 0.0 ? kInfinity : ph.model->inverse_cumhaz(-std::log(mass) / ph.risk);
          },
          [mass](const Step& s) { return LinearisedStep{*s.curve}.inverse_tail(mass); },
      },
      law_);
}

}  // namespace cosarc
