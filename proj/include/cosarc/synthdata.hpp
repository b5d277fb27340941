#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosarc/conditional_model.hpp"
#include "cosarc/dataset.hpp"
#include "cosarc/models.hpp"
#include "cosarc/random.hpp"

namespace cosarc {

/// One synthetic data-generating distribution: X uniform on a box, then T and
/// C drawn independently given X.
struct SettingSpec {
  int id = 0;
  std::size_t p = 0;
  double x_low = 0.0;
  double x_high = 1.0;
  std::function<LawParams(CovariateView)> survival;
  std::function<LawParams(CovariateView)> censoring;
};

inline constexpr int kSettingCount = 10;

// Throws std::invalid_argument("unknown setting id ...") outside 1..10.
const SettingSpec& setting(int id);

double sample_law(const LawParams& law, RandomStream& stream);

// Record i draws from stream.substream(i), so the output does not depend on
// how generation is chunked.
std::vector<LatentRecord> generate_latent(const SettingSpec& setting, std::size_t n, const RandomStream& stream);

Dataset apply_right_censoring(std::span<const LatentRecord> latent, std::size_t p);

double oracle_quantile(const SettingSpec& setting, CovariateView x, double level);

ConditionalModel true_censoring_model(const SettingSpec& setting);
ConditionalModel true_survival_model(const SettingSpec& setting);

// Resolves "setting-<id>/survival" and "setting-<id>/censoring".
std::optional<AnalyticModel> resolve_setting_model(std::string_view tag);

}  // namespace cosarc
