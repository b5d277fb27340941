#pragma once

#include <memory>
#include <variant>

#include "cosarc/models.hpp"

namespace cosarc {

struct QuantileResult {
  double time = 0.0;
  bool plateau = false;  // curve never reached the level; time is the last observed time
};

/// A fitted conditional law of T | X = x (or C | X = x) for one fixed x.
///
/// Step families (KM, kNN-KM) answer survival() and quantile() from the
/// right-continuous product-limit curve. Their density() and tail() come from
/// the piecewise-linear interpolation of 1 - S through (0, 0) and the event
/// knots, followed by an exponential tail carrying the remaining mass whose
/// mean equals the last knot spacing. For continuous families tail() equals
/// survival().
class ConditionalDistribution {
 public:
  struct Lognormal {
    double mu = 0.0;
    double sigma = 1.0;  // 0 gives a point mass at exp(mu)
  };
  struct Exponential {
    double rate = 1.0;
  };
  struct ProportionalHazards {
    std::shared_ptr<const CoxModel> model;
    double risk = 1.0;  // exp(beta . x)
  };
  struct Step {
    std::shared_ptr<const KMCurve> curve;
  };
  using Law = std::variant<Lognormal, Exponential, ProportionalHazards, Step>;

  explicit ConditionalDistribution(Law law) : law_(std::move(law)) {}

  const Law& law() const { return law_; }
  bool is_step() const { return std::holds_alternative<Step>(law_); }

  double survival(double t) const;
  double cdf(double t) const { return 1.0 - survival(t); }
  double density(double t) const;

  // Smallest t with cdf(t) >= level. level <= 0 gives 0; level >= 1 gives
  // the right edge of the support (+inf for unbounded laws).
  QuantileResult quantile_checked(double level) const;
  double quantile(double level) const { return quantile_checked(level).time; }

  // Mass of the density beyond t, and its inverse: smallest t with tail(t) <= mass.
  double tail(double t) const;
  double inverse_tail(double mass) const;

 private:
  Law law_;
};

}  // namespace cosarc
