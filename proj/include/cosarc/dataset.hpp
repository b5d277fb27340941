#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace cosarc {

// Times live on the extended positive half-line; +inf is a legal value
// wherever a bound or quantile can be vacuous.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using Covariates = std::vector<double>;
using CovariateView = std::span<const double>;

/// One right-censored observation: covariates, min(T, C) and 1{T < C}.
struct ObservedRecord {
  Covariates x;
  double t_tilde = 0.0;
  bool event = false;
};

/// A fully observed draw (X, T, C); only available for synthetic data.
struct LatentRecord {
  Covariates x;
  double t = 0.0;
  double c = 0.0;

  ObservedRecord observe() const { return {x, t < c ? t : c, t < c}; }
};

/// Right-censored observations sharing a fixed covariate dimension.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t p) : p_(p) {}
  Dataset(std::size_t p, std::vector<ObservedRecord> records);

  // Throws std::invalid_argument if the record breaks a dataset invariant.
  void add(ObservedRecord record);

  std::size_t p() const { return p_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const ObservedRecord& operator[](std::size_t i) const { return records_[i]; }
  std::span<const ObservedRecord> records() const { return records_; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  std::size_t event_count() const;

  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset head(std::size_t n) const;

  // Keeps only the first `columns` covariates.
  Dataset project(std::size_t columns) const;

  // Event indicator replaced by 1 - E; used to fit censoring models.
  Dataset flipped() const;

 private:
  std::size_t p_ = 0;
  std::vector<ObservedRecord> records_;
};

}  // namespace cosarc
