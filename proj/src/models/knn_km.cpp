#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cosarc/models.hpp"

namespace cosarc {

std::size_t default_neighbor_count(std::size_t n) {
  const std::size_t tenth = (n + 9) / 10;
  return std::min(n, std::max<std::size_t>(25, tenth));
}

KnnKMModel fit_knn_km(const Dataset& data, std::size_t k) {
  if (data.empty()) throw FitError("kNN-KM: empty dataset");
  if (k < 1) throw std::invalid_argument("kNN-KM: k must be at least 1");
  if (k > data.size()) throw std::invalid_argument("kNN-KM: k exceeds the training size");

  KnnKMModel m;
  m.p = data.p();
  m.k = k;
  const double n = static_cast<double>(data.size());
  m.means.assign(m.p, 0.0);
  m.scales.assign(m.p, 0.0);
  for (const auto& r : data) {
    for (std::size_t j = 0; j < m.p; ++j) m.means[j] += r.x[j] / n;
  }
  for (const auto& r : data) {
    for (std::size_t j = 0; j < m.p; ++j) m.scales[j] += (r.x[j] - m.means[j]) * (r.x[j] - m.means[j]);
  }
  for (auto& s : m.scales) {
    s = data.size() > 1 ? std::sqrt(s / (n - 1.0)) : 0.0;
    if (!(s > 0.0)) s = 1.0;
  }
  m.standardized.reserve(data.size() * m.p);
  for (const auto& r : data) {
    for (std::size_t j = 0; j < m.p; ++j) m.standardized.push_back((r.x[j] - m.means[j]) / m.scales[j]);
    m.times.push_back(r.t_tilde);
    m.events.push_back(r.event);
  }
  return m;
}

std::vector<std::size_t> KnnKMModel::neighbors(CovariateView x) const {
  if (x.size() < p) throw std::invalid_argument("kNN-KM: covariate dimension mismatch");
  std::vector<double> z(p);
  for (std::size_t j = 0; j < p; ++j) z[j] = (x[j] - means[j]) / scales[j];

  std::vector<double> dist(size());
  for (std::size_t i = 0; i < size(); ++i) {
    double d = 0.0;
    const double* row = standardized.data() + i * p;
    for (std::size_t j = 0; j < p; ++j) d += (row[j] - z[j]) * (row[j] - z[j]);
    dist[i] = d;
  }
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(order.begin(), kth, order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  const double radius = dist[*kth];

  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < size(); ++i) {
    if (dist[i] <= radius) out.push_back(i);
  }
  return out;
}

KMCurve KnnKMModel::neighborhood_curve(CovariateView x) const {
  std::vector<std::pair<double, bool>> obs;
  for (std::size_t i : neighbors(x)) obs.emplace_back(times[i], events[i]);
  return product_limit(std::move(obs));
}

}  // namespace cosarc
