#include "cosarc/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cosarc {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("length mismatch");
  if (a == 0) throw std::invalid_argument("no test points");
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

double coverage(std::span<const double> lpbs, std::span<const double> true_times) {
  check_lengths(lpbs.size(), true_times.size());
  std::size_t covered = 0;
  for (std::size_t i = 0; i < lpbs.size(); ++i) covered += true_times[i] >= lpbs[i] ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(lpbs.size());
}

CoverageBounds coverage_bounds(std::span<const double> lpbs, std::span<const double> observed_times,
                               const std::vector<bool>& events) {
  check_lengths(lpbs.size(), observed_times.size());
  check_lengths(lpbs.size(), events.size());
  std::size_t below = 0, violated = 0;
  for (std::size_t i = 0; i < lpbs.size(); ++i) {
    if (lpbs[i] <= observed_times[i]) {
      ++below;
    } else if (events[i]) {
      ++violated;
    }
  }
  const double n = static_cast<double>(lpbs.size());
  CoverageBounds b;
  b.low = static_cast<double>(below) / n;
  b.upp = 1.0 - static_cast<double>(violated) / n;
  b.mid = 0.5 * (b.low + b.upp);
  return b;
}

CoverageBounds coverage_bounds(std::span<const double> lpbs, std::span<const double> observed_times,
                               std::span<const bool> events) {
  return coverage_bounds(lpbs, observed_times, std::vector<bool>(events.begin(), events.end()));
}

double normalized_lpb(std::span<const double> lpbs, std::span<const double> oracle_lpbs) {
  check_lengths(lpbs.size(), oracle_lpbs.size());
  const double oracle_mean = mean(oracle_lpbs);
  if (!(oracle_mean > 0.0)) throw std::invalid_argument("oracle bounds have zero mean");
  return mean(lpbs) / oracle_mean;
}

double stability_cv(const std::vector<std::vector<double>>& m) {
  if (m.size() < 2) throw std::invalid_argument("stability_cv needs at least 2 repetitions");
  const std::size_t points = m.front().size();
  if (points == 0) throw std::invalid_argument("no test points");
  for (const auto& row : m) {
    if (row.size() != points) throw std::invalid_argument("length mismatch");
  }
  const double reps = static_cast<double>(m.size());
  double total = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    double mu = 0.0;
    for (const auto& row : m) mu += row[j] / reps;
    if (mu == 0.0) continue;
    double ss = 0.0;
    for (const auto& row : m) ss += (row[j] - mu) * (row[j] - mu);
    total += std::sqrt(ss / (reps - 1.0)) / mu;
  }
  return total / static_cast<double>(points);
}

MeanSE mean_se(std::span<const double> values) {
  if (values.empty()) return {};
  MeanSE out;
  out.mean = mean(values);
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double n = static_cast<double>(values.size());
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace cosarc
