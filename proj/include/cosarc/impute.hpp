#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cosarc/conditional_model.hpp"
#include "cosarc/dataset.hpp"
#include "cosarc/random.hpp"

namespace cosarc {

inline constexpr double kTailFloor = 1e-12;

struct ImputedRecord {
  Covariates x;
  double t_tilde = 0.0;
  bool event = false;
  double c_hat = 0.0;
};

struct ImputationDiagnostics {
  std::size_t sampled = 0;
  std::size_t tail_clips = 0;  // records whose tail mass hit kTailFloor
};

/// Calibration triplets (X, T~, C^) in input order. Rows with event = 0 keep
/// their observed censoring time; rows with event = 1 carry a draw strictly
/// above T~.
struct ImputedDataset {
  std::size_t p = 0;
  std::vector<ImputedRecord> records;
  std::string model_id;
  std::uint64_t seed = 0;
  ImputationDiagnostics diagnostics;

  std::size_t size() const { return records.size(); }
  const ImputedRecord& operator[](std::size_t i) const { return records[i]; }
  auto begin() const { return records.begin(); }
  auto end() const { return records.end(); }
};

// Mass of the censoring density beyond t, clipped below at kTailFloor.
double censoring_tail(const ConditionalModel& cens, CovariateView x, double t);
double censoring_tail(const ConditionalDistribution& law, double t);

// Same quantity by quadrature of the density over [t, inf).
double censoring_tail_numeric(const ConditionalDistribution& law, double t);

struct TruncatedDraw {
  double value = 0.0;
  bool clipped = false;  // tail mass at the floor; value is t_tilde * (1 + 1e-6)
};

/// Inverse-transform draw from the censoring law restricted to (t_tilde, inf).
TruncatedDraw sample_truncated(const ConditionalDistribution& law, double t_tilde, RandomStream& stream);
double sample_truncated(const ConditionalModel& cens, CovariateView x, double t_tilde, RandomStream& stream);

/// Record i draws from stream.substream(i).
ImputedDataset impute_dataset(const Dataset& data, const ConditionalModel& cens, const RandomStream& stream);

/// Columns x1..xp,time,c_hat.
void write_imputed_csv(std::ostream& out, const ImputedDataset& imputed);

}  // namespace cosarc
