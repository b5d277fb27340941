#pragma once

#include <span>
#include <vector>

namespace cosarc {

struct Atom {
  double value = 0.0;  // may be +inf
  double mass = 0.0;
};

/// Finite discrete law on the extended reals, atoms sorted by value.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  // Sorts atoms (stable, +inf last) and checks masses are nonnegative
  // and sum to one within 1e-9.
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  // Weighted-conformal law: score atoms weighted by raw_weights plus a
  // +inf atom weighted by test_weight, all normalised jointly.
  static DiscreteDistribution weighted_scores(std::span<const double> scores,
                                              std::span<const double> raw_weights,
                                              double test_weight);

  std::span<const Atom> atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double infinity_mass() const;

 private:
  std::vector<Atom> atoms_;
};

/// Smallest atom value whose cumulative mass reaches `level`.
/// Throws std::invalid_argument("empty distribution") on an empty law.
double weighted_quantile(const DiscreteDistribution& dist, double level);

struct NormalizedWeights {
  std::vector<double> masses;
  double infinity_mass = 0.0;
};

/// p_i = W_i / (sum_j W_j + w_test), p_inf = w_test / (...).
/// Throws std::invalid_argument("degenerate weights") when every weight is 0.
NormalizedWeights normalized_weights(std::span<const double> raw_weights, double test_weight);

}  // namespace cosarc
