#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cosarc/experiment.hpp"

namespace cosarc {

struct PredictRequest {
  Method method = Method::uncalibrated;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  std::optional<ConditionalModel> surv;
  std::optional<ConditionalModel> cens;
  std::optional<Dataset> calibration;
  std::optional<int> setting;
  CandidateFamily candidate_family = CandidateFamily::quantile_level;
  double weight_floor = kDefaultWeightFloor;
  std::optional<double> c0;
};

/// One bound per row of `data`. Throws ConfigError for missing inputs or a
/// covariate dimension that does not match the models.
std::vector<double> predict_lpbs(const PredictRequest& request, const Dataset& data);

/// Columns row_id,lpb (row_id counts from 0).
void write_lpb_csv(std::ostream& out, std::span<const double> lpbs);

}  // namespace cosarc
