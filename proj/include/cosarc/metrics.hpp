#pragma once

#include <span>
#include <vector>

namespace cosarc {

struct CoverageBounds {
  double low = 0.0;
  double mid = 0.0;
  double upp = 0.0;
};

// Share of points with T >= L.
double coverage(std::span<const double> lpbs, std::span<const double> true_times);

// Empirical bounds on coverage when only (T~, E) is observed:
// low = P^[L <= T~], upp = 1 - P^[L > T~, E = 1].
CoverageBounds coverage_bounds(std::span<const double> lpbs, std::span<const double> observed_times,
                               std::span<const bool> events);
CoverageBounds coverage_bounds(std::span<const double> lpbs, std::span<const double> observed_times,
                               const std::vector<bool>& events);

double normalized_lpb(std::span<const double> lpbs, std::span<const double> oracle_lpbs);

// Rows are repetitions, columns test points. Mean over points of sd / mean
// across rows (sample sd); points with mean 0 contribute 0.
double stability_cv(const std::vector<std::vector<double>>& lpb_matrix);

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean; 0 for fewer than 2 values
};

MeanSE mean_se(std::span<const double> values);

}  // namespace cosarc
