#include "cosarc/impute.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cosarc/csv.hpp"

namespace cosarc {

double censoring_tail(const ConditionalDistribution& law, double t) {
  if (t <= 0.0) return 1.0;
  return std::max(law.tail(t), kTailFloor);
}

double censoring_tail(const ConditionalModel& cens, CovariateView x, double t) {
  return censoring_tail(cens.at(x), t);
}

namespace {

// Points where a piecewise density may jump or kink.
std::vector<double> density_knots(const ConditionalDistribution& law) {
  if (const auto* s = std::get_if<ConditionalDistribution::Step>(&law.law())) {
    auto k = s->curve->event_times;
    k.push_back(s->curve->last_time);
    return k;
  }
  if (const auto* ph = std::get_if<ConditionalDistribution::ProportionalHazards>(&law.law())) {
    return ph->model->knot_times;
  }
  return {};
}

}  // namespace

double censoring_tail_numeric(const ConditionalDistribution& law, double t) {
  if (t <= 0.0) t = 0.0;
  auto f = [&](double u) { return law.density(u); };
  // Smooth pieces between knots, then the unbounded remainder.
  double mass = 0.0, from = t;
  auto knots = density_knots(law);
  std::sort(knots.begin(), knots.end());
  for (double k : knots) {
    if (k <= from) continue;
    mass += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, from, k, 15, 1e-12);
    from = k;
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  mass += integrator.integrate([&](double u) { return law.density(from + u); }, 1e-10);
  return std::max(std::min(mass, 1.0), kTailFloor);
}

TruncatedDraw sample_truncated(const ConditionalDistribution& law, double t_tilde, RandomStream& stream) {
  if (!(t_tilde > 0.0)) throw std::invalid_argument("sample_truncated: t_tilde must be positive");
  const double u = stream.uniform();
  const double mass = law.tail(t_tilde);
  if (!(mass > kTailFloor)) return {t_tilde * (1.0 + 1e-6), true};
  double c = law.inverse_tail(mass * (1.0 - u));
  if (!(c > t_tilde)) c = std::nextafter(t_tilde, kInfinity);
  return {c, false};
}

double sample_truncated(const ConditionalModel& cens, CovariateView x, double t_tilde, RandomStream& stream) {
  return sample_truncated(cens.at(x), t_tilde, stream).value;
}

ImputedDataset impute_dataset(const Dataset& data, const ConditionalModel& cens, const RandomStream& stream) {
  if (data.empty()) throw std::invalid_argument("impute: empty dataset");
  ImputedDataset out;
  out.p = data.p();
  out.model_id = std::string(to_string(cens.family())) + "/" + std::string(to_string(cens.target()));
  out.seed = stream.key();
  out.records.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data[i];
    ImputedRecord rec{r.x, r.t_tilde, r.event, r.t_tilde};
    if (r.event) {
      RandomStream s = stream.substream(i);
      const TruncatedDraw draw = sample_truncated(cens.at(r.x), r.t_tilde, s);
      rec.c_hat = draw.value;
      ++out.diagnostics.sampled;
      if (draw.clipped) ++out.diagnostics.tail_clips;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

void write_imputed_csv(std::ostream& out, const ImputedDataset& imputed) {
  for (std::size_t j = 1; j <= imputed.p; ++j) out << 'x' << j << ',';
  out << "time,c_hat\n";
  for (const auto& r : imputed) {
    for (double v : r.x) out << format_double(v) << ',';
    out << format_double(r.t_tilde) << ',' << format_double(r.c_hat) << '\n';
  }
}

}  // namespace cosarc
