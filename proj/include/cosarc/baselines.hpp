#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cosarc/conditional_model.hpp"
#include "cosarc/dataset.hpp"
#include "cosarc/models.hpp"
#include "cosarc/random.hpp"
#include "cosarc/synthdata.hpp"

namespace cosarc {

enum class BaselineTag { oracle, uncalibrated, naive_cqr, km_decensor };

double uncalibrated_lpb(const ConditionalModel& surv, double alpha, CovariateView x_test);

double oracle_lpb(const SettingSpec& setting, double alpha, CovariateView x_test);

/// Unweighted split conformal with scores q_alpha(X_i) - target_i and a
/// 1/(n+1) atom at +inf. Shared by naive CQR and KM decensoring.
class SplitConformalPredictor {
 public:
  SplitConformalPredictor(const Dataset& data, std::span<const double> targets, ConditionalModel surv, double alpha);

  double eta() const { return eta_; }
  double lpb(CovariateView x) const;

 private:
  ConditionalModel surv_;
  double alpha_;
  double eta_;
};

SplitConformalPredictor naive_cqr(const Dataset& data, const ConditionalModel& surv, double alpha);
double naive_cqr_lpb(const Dataset& data, const ConditionalModel& surv, double alpha, CovariateView x_test);

struct DecensorDiagnostics {
  std::size_t sampled = 0;
  std::size_t degenerate = 0;  // KM had no mass beyond C_i
};

/// Draw from the marginal KM law conditional on T > c: S(t) / S(c) for t >= c.
/// Mass the curve leaves beyond its last knot goes to max(last_time, next
/// double above c).
double sample_conditional_km(const KMCurve& km, double c, RandomStream& stream, bool* degenerate = nullptr);

// T'_i for every record: event rows keep T~_i, censored rows are decensored
// with stream.substream(i).
std::vector<double> km_decensored_times(const Dataset& data, const RandomStream& stream,
                                        DecensorDiagnostics* diagnostics = nullptr);

SplitConformalPredictor km_decensor(const Dataset& data, const ConditionalModel& surv, double alpha,
                                    const RandomStream& stream, DecensorDiagnostics* diagnostics = nullptr);
double km_decensor_lpb(const Dataset& data, const ConditionalModel& surv, double alpha, CovariateView x_test,
                       const RandomStream& stream);

}  // namespace cosarc
