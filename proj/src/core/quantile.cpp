#include "cosarc/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cosarc {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.mass >= 0.0) || std::isnan(a.value)) {
      throw std::invalid_argument("atoms need nonnegative mass and a non-NaN value");
    }
    total += a.mass;
  }
  if (!atoms_.empty() && std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("atom masses must sum to one");
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });
}

DiscreteDistribution DiscreteDistribution::weighted_scores(std::span<const double> scores,
                                                           std::span<const double> raw_weights,
                                                           double test_weight) {
  if (scores.size() != raw_weights.size()) {
    throw std::invalid_argument("scores and weights differ in length");
  }
  auto norm = normalized_weights(raw_weights, test_weight);
  std::vector<Atom> atoms;
  atoms.reserve(scores.size() + 1);
  for (std::size_t i = 0; i < scores.size(); ++i) atoms.push_back({scores[i], norm.masses[i]});
  atoms.push_back({std::numeric_limits<double>::infinity(), norm.infinity_mass});
  return DiscreteDistribution(std::move(atoms));
}

double DiscreteDistribution::infinity_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) {
    if (std::isinf(a.value) && a.value > 0) m += a.mass;
  }
  return m;
}

double weighted_quantile(const DiscreteDistribution& dist, double level) {
  if (dist.empty()) throw std::invalid_argument("empty distribution");
  if (!(level > 0.0 && level <= 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1]");
  double cumulative = 0.0;
  for (const auto& atom : dist.atoms()) {
    cumulative += atom.mass;
    if (cumulative >= level) return atom.value;
  }
  // Masses sum to one only up to rounding; the top atom closes the gap.
  return dist.atoms().back().value;
}

NormalizedWeights normalized_weights(std::span<const double> raw_weights, double test_weight) {
  if (test_weight < 0.0) throw std::invalid_argument("weights must be nonnegative");
  double total = test_weight;
  for (double w : raw_weights) {
    if (w < 0.0) throw std::invalid_argument("weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("degenerate weights");
  NormalizedWeights out;
  out.masses.reserve(raw_weights.size());
  for (double w : raw_weights) out.masses.push_back(w / total);
  out.infinity_mass = test_weight / total;
  return out;
}

}  // namespace cosarc
