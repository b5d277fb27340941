#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>

#include "json.hpp"

#include "cosarc/conditional_model.hpp"

namespace cosarc {

inline constexpr int kModelFormatVersion = 1;

// Maps an analytic model tag (e.g. "setting-3/censoring") back to its law.
using AnalyticResolver = std::function<std::optional<AnalyticModel>(std::string_view tag)>;

nlohmann::json model_to_json(const ConditionalModel& model);
ConditionalModel model_from_json(const nlohmann::json& doc, const AnalyticResolver& resolver = {});

void save_model(const std::filesystem::path& path, const ConditionalModel& model);
ConditionalModel load_model(const std::filesystem::path& path, const AnalyticResolver& resolver = {});

}  // namespace cosarc
