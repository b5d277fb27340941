#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "cosarc/experiment.hpp"

namespace cosarc {

using nlohmann::json;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::drcosarc_fixed: return "drcosarc-fixed";
    case Method::drcosarc_adaptive: return "drcosarc-adaptive";
    case Method::uncalibrated: return "uncalibrated";
    case Method::naive_cqr: return "naive-cqr";
    case Method::km_decensor: return "km-decensor";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::none: return "none";
    case SweepAxis::cens_train_size: return "cens-train-size";
    case SweepAxis::train_size: return "train-size";
    case SweepAxis::p1: return "p1";
    case SweepAxis::n_cal: return "n-cal";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::drcosarc_fixed, Method::drcosarc_adaptive, Method::uncalibrated,
                                           Method::naive_cqr,      Method::km_decensor,       Method::oracle};
  return methods;
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected drcosarc-fixed, drcosarc-adaptive, uncalibrated, naive-cqr, km-decensor, oracle)");
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::none, SweepAxis::cens_train_size, SweepAxis::train_size, SweepAxis::p1, SweepAxis::n_cal}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected none, cens-train-size, train-size, p1, n-cal)");
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

ModelSpec model_spec_from_json(const json& j, ModelSpec spec, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  reject_unknown_keys(j, {"family", "mask", "neighbors"}, where);
  try {
    if (j.contains("family")) spec.family = parse_model_family(j["family"].get<std::string>());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (spec.family == ModelFamily::analytic) throw ConfigError("analytic models cannot be fitted; use true_*_model");
  if (j.contains("mask")) spec.mask = j["mask"].get<std::size_t>();
  if (j.contains("neighbors")) spec.neighbors = j["neighbors"].get<std::size_t>();
  return spec;
}

json model_spec_to_json(const ModelSpec& s) {
  return {{"family", std::string(to_string(s.family))}, {"mask", s.mask}, {"neighbors", s.neighbors}};
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown_keys(doc,
                      {"setting", "dataset", "n_train", "n_cal", "n_test", "split", "survival_model",
                       "censoring_model", "true_survival_model", "true_censoring_model", "methods", "alpha", "reps",
                       "seed", "sweep", "candidate_family", "weight_floor", "c0", "threads", "failure_threshold",
                       "keep_lpbs"},
                      "configuration");
  ExperimentConfig c;
  try {
    if (doc.contains("setting") && !doc["setting"].is_null()) c.setting = doc["setting"].get<int>();
    if (doc.contains("dataset") && !doc["dataset"].is_null()) c.dataset = doc["dataset"].get<std::string>();
    if (doc.contains("n_train")) c.n_train = doc["n_train"].get<std::size_t>();
    if (doc.contains("n_cal")) c.n_cal = doc["n_cal"].get<std::size_t>();
    if (doc.contains("n_test")) c.n_test = doc["n_test"].get<std::size_t>();
    if (doc.contains("split")) {
      const json& s = doc["split"];
      reject_unknown_keys(s, {"train", "calibration"}, "split");
      if (s.contains("train")) c.split_train = s["train"].get<double>();
      if (s.contains("calibration")) c.split_cal = s["calibration"].get<double>();
    }
    if (doc.contains("survival_model")) c.survival = model_spec_from_json(doc["survival_model"], c.survival, "survival_model");
    if (doc.contains("censoring_model")) {
      c.censoring = model_spec_from_json(doc["censoring_model"], c.censoring, "censoring_model");
    }
    if (doc.contains("true_survival_model")) c.true_survival_model = doc["true_survival_model"].get<bool>();
    if (doc.contains("true_censoring_model")) c.true_censoring_model = doc["true_censoring_model"].get<bool>();
    if (doc.contains("methods")) {
      c.methods.clear();
      for (const auto& m : doc["methods"]) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("alpha")) c.alpha = doc["alpha"].get<double>();
    if (doc.contains("reps")) c.reps = doc["reps"].get<std::size_t>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("sweep")) {
      const json& s = doc["sweep"];
      reject_unknown_keys(s, {"axis", "grid"}, "sweep");
      if (s.contains("axis")) c.sweep = parse_sweep_axis(s["axis"].get<std::string>());
      if (s.contains("grid")) c.grid = s["grid"].get<std::vector<double>>();
    }
    if (doc.contains("candidate_family")) {
      try {
        c.candidate_family = parse_candidate_family(doc["candidate_family"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (doc.contains("weight_floor")) c.weight_floor = doc["weight_floor"].get<double>();
    if (doc.contains("c0") && !doc["c0"].is_null()) c.c0 = doc["c0"].get<double>();
    if (doc.contains("threads")) c.threads = doc["threads"].get<std::size_t>();
    if (doc.contains("failure_threshold")) c.failure_threshold = doc["failure_threshold"].get<double>();
    if (doc.contains("keep_lpbs")) c.keep_lpbs = doc["keep_lpbs"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["setting"] = c.setting ? json(*c.setting) : json(nullptr);
  doc["dataset"] = c.dataset ? json(*c.dataset) : json(nullptr);
  doc["n_train"] = c.n_train;
  doc["n_cal"] = c.n_cal;
  doc["n_test"] = c.n_test;
  doc["split"] = {{"train", c.split_train}, {"calibration", c.split_cal}};
  doc["survival_model"] = model_spec_to_json(c.survival);
  doc["censoring_model"] = model_spec_to_json(c.censoring);
  doc["true_survival_model"] = c.true_survival_model;
  doc["true_censoring_model"] = c.true_censoring_model;
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  doc["methods"] = methods;
  doc["alpha"] = c.alpha;
  doc["reps"] = c.reps;
  doc["seed"] = c.seed;
  doc["sweep"] = {{"axis", std::string(to_string(c.sweep))}, {"grid", c.grid}};
  doc["candidate_family"] = std::string(to_string(c.candidate_family));
  doc["weight_floor"] = c.weight_floor;
  doc["c0"] = c.c0 ? json(*c.c0) : json(nullptr);
  doc["failure_threshold"] = c.failure_threshold;
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration file " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void validate(const ExperimentConfig& c, std::size_t p) {
  if (c.setting.has_value() == c.dataset.has_value()) {
    throw ConfigError("exactly one of 'setting' and 'dataset' must be given");
  }
  if (c.setting && (*c.setting < 1 || *c.setting > kSettingCount)) {
    throw ConfigError("unknown setting id " + std::to_string(*c.setting) + " (expected 1..10)");
  }
  if (c.reps < 1) throw ConfigError("reps must be at least 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(c.weight_floor > 0.0 && c.weight_floor < 0.5)) throw ConfigError("weight_floor must lie in (0, 0.5)");
  if (c.c0 && !(*c.c0 > 0.0)) throw ConfigError("c0 must be positive");
  if (c.methods.empty()) throw ConfigError("no methods selected");
  if (!(c.failure_threshold >= 0.0 && c.failure_threshold <= 1.0)) {
    throw ConfigError("failure_threshold must lie in [0, 1]");
  }
  for (const ModelSpec* spec : {&c.survival, &c.censoring}) {
    if (spec->mask > p) {
      throw ConfigError("covariate mask " + std::to_string(spec->mask) + " exceeds p = " + std::to_string(p));
    }
  }
  if (c.setting) {
    if (c.n_train < 1 || c.n_cal < 1 || c.n_test < 1) throw ConfigError("sample sizes must be positive");
  } else {
    if (!(c.split_train > 0.0 && c.split_cal > 0.0 && c.split_train + c.split_cal < 1.0)) {
      throw ConfigError("split fractions must be positive and leave room for a test set");
    }
    if (c.true_survival_model || c.true_censoring_model) {
      throw ConfigError("true models are only available for synthetic settings");
    }
    if (std::find(c.methods.begin(), c.methods.end(), Method::oracle) != c.methods.end()) {
      throw ConfigError("oracle requires a synthetic setting");
    }
  }
  if (c.sweep == SweepAxis::none) {
    if (!c.grid.empty()) throw ConfigError("a sweep grid needs a sweep axis");
  } else {
    if (c.grid.empty()) throw ConfigError("sweep axis '" + std::string(to_string(c.sweep)) + "' needs a grid");
    for (double g : c.grid) {
      if (!(g >= 1.0) || g != std::floor(g)) throw ConfigError("sweep grid values must be positive integers");
      if (c.sweep == SweepAxis::p1 && g > static_cast<double>(p)) {
        throw ConfigError("p1 grid value exceeds p = " + std::to_string(p));
      }
    }
    if (c.sweep == SweepAxis::p1 && c.true_censoring_model) {
      throw ConfigError("a p1 sweep has no effect with the true censoring model");
    }
  }
}

}  // namespace cosarc
