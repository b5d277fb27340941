#include "cosarc/serialize.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace cosarc {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json curve_to_json(const KMCurve& c) {
  return {{"event_times", c.event_times}, {"surv", c.surv}, {"last_time", c.last_time}};
}

KMCurve curve_from_json(const json& j) {
  KMCurve c;
  j.at("event_times").get_to(c.event_times);
  j.at("surv").get_to(c.surv);
  j.at("last_time").get_to(c.last_time);
  if (c.event_times.size() != c.surv.size()) throw std::invalid_argument("model file: knot arrays differ in length");
  return c;
}

}  // namespace

json model_to_json(const ConditionalModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["family"] = std::string(to_string(model.family()));
  doc["target"] = std::string(to_string(model.target()));
  doc["input_dim"] = model.input_dim();
  doc["mask"] = model.columns();
  doc["parameters"] = std::visit(
      Overloaded{
          [](const std::shared_ptr<const KMCurve>& c) { return curve_to_json(*c); },
          [](const std::shared_ptr<const AFTModel>& m) {
            return json{{"intercept", m->intercept}, {"beta", m->beta}, {"sigma", m->sigma}};
          },
          [](const std::shared_ptr<const CoxModel>& m) {
            return json{{"beta", m->beta}, {"knot_times", m->knot_times}, {"cumulative_hazard", m->cumulative_hazard}};
          },
          [](const std::shared_ptr<const KnnKMModel>& m) {
            std::vector<int> events(m->events.begin(), m->events.end());
            return json{{"p", m->p},           {"k", m->k},         {"means", m->means},
                        {"scales", m->scales}, {"standardized", m->standardized},
                        {"times", m->times},   {"events", events}};
          },
          [](const std::shared_ptr<const AnalyticModel>& m) { return json{{"tag", m->tag}, {"p", m->p}}; },
      },
      model.parameters());
  return doc;
}

ConditionalModel model_from_json(const json& doc, const AnalyticResolver& resolver) {
  const int version = doc.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::invalid_argument("model file: unsupported format version " + std::to_string(version));
  }
  const ModelFamily family = parse_model_family(doc.at("family").get<std::string>());
  const Target target = parse_target(doc.at("target").get<std::string>());
  const auto input_dim = doc.at("input_dim").get<std::size_t>();
  const auto columns = doc.at("mask").get<std::size_t>();
  const json& p = doc.at("parameters");

  switch (family) {
    case ModelFamily::kaplan_meier:
      return {std::make_shared<const KMCurve>(curve_from_json(p)), target, input_dim, columns};
    case ModelFamily::lognormal_aft: {
      AFTModel m;
      p.at("intercept").get_to(m.intercept);
      p.at("beta").get_to(m.beta);
      p.at("sigma").get_to(m.sigma);
      if (m.beta.size() != columns) throw std::invalid_argument("model file: coefficient count does not match mask");
      return {std::make_shared<const AFTModel>(std::move(m)), target, input_dim, columns};
    }
    case ModelFamily::cox: {
      CoxModel m;
      p.at("beta").get_to(m.beta);
      p.at("knot_times").get_to(m.knot_times);
      p.at("cumulative_hazard").get_to(m.cumulative_hazard);
      if (m.beta.size() != columns) throw std::invalid_argument("model file: coefficient count does not match mask");
      return {std::make_shared<const CoxModel>(std::move(m)), target, input_dim, columns};
    }
    case ModelFamily::knn_km: {
      KnnKMModel m;
      p.at("p").get_to(m.p);
      p.at("k").get_to(m.k);
      p.at("means").get_to(m.means);
      p.at("scales").get_to(m.scales);
      p.at("standardized").get_to(m.standardized);
      p.at("times").get_to(m.times);
      for (int e : p.at("events").get<std::vector<int>>()) m.events.push_back(e != 0);
      if (m.standardized.size() != m.times.size() * m.p || m.events.size() != m.times.size()) {
        throw std::invalid_argument("model file: inconsistent neighbour table");
      }
      return {std::make_shared<const KnnKMModel>(std::move(m)), target, input_dim, columns};
    }
    case ModelFamily::analytic: {
      const auto tag = p.at("tag").get<std::string>();
      std::optional<AnalyticModel> m = resolver ? resolver(tag) : std::nullopt;
      if (!m) throw std::invalid_argument("model file: unknown analytic model '" + tag + "'");
      return {std::make_shared<const AnalyticModel>(std::move(*m)), target, input_dim, columns};
    }
  }
  throw std::invalid_argument("model file: unknown family");
}

void save_model(const std::filesystem::path& path, const ConditionalModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << model_to_json(model).dump(2) << '\n';
}

ConditionalModel load_model(const std::filesystem::path& path, const AnalyticResolver& resolver) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("model file " + path.string() + ": " + e.what());
  }
  return model_from_json(doc, resolver);
}

}  // namespace cosarc
