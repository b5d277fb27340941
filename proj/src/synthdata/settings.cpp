#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cosarc/normal.hpp"
#include "cosarc/synthdata.hpp"

namespace cosarc {

namespace {

LawParams lognormal(double mu, double sigma) { return {LawParams::Kind::lognormal, mu, sigma, 1.0}; }
LawParams exponential(double rate) { return {LawParams::Kind::exponential, 0.0, 1.0, rate}; }

double ind(bool b) { return b ? 1.0 : 0.0; }

// x is 0-based here: x[0] is X1.
std::array<SettingSpec, kSettingCount> make_registry() {
  return {{
      {1, 100, 0.0, 1.0,
       [](CovariateView x) {
         return lognormal(ind(x[1] > 0.5) + ind(x[2] < 0.5) + std::pow(1.0 - x[0], 0.25), (1.0 - x[0]) / 10.0);
       },
       [](CovariateView x) {
         return lognormal(ind(x[1] > 0.5) + ind(x[2] < 0.5) + std::pow(1.0 - x[0], 4.0) + 0.4, x[1] / 10.0);
       }},
      {2, 100, 0.0, 1.0, [](CovariateView x) { return lognormal(std::pow(x[0], 0.25), 0.1); },
       [](CovariateView x) { return lognormal(std::pow(x[0], 4.0) + 0.4, 0.1); }},
      {3, 100, -1.0, 1.0,
       [](CovariateView x) {
         return lognormal(std::log(2.0) + 1.0 + 0.55 * (x[0] * x[0] - x[2] * x[4]), std::abs(x[9]) + 1.0);
       },
       [](CovariateView) { return exponential(0.4); }},
      {4, 100, -1.0, 1.0,
       [](CovariateView x) { return lognormal(std::log(2.0) + 1.0 + 0.55 * (x[0] * x[0] - x[2] * x[4]), 1.0); },
       [](CovariateView) { return exponential(0.4); }},
      {5, 1, 0.0, 4.0, [](CovariateView x) { return lognormal(0.632 * x[0], 2.0); },
       [](CovariateView) { return exponential(0.1); }},
      {6, 1, 0.0, 4.0, [](CovariateView x) { return lognormal(3.0 * ind(x[0] > 2.0) + x[0] * ind(x[0] < 2.0), 0.5); },
       [](CovariateView) { return exponential(0.1); }},
      {7, 1, 0.0, 4.0, [](CovariateView x) { return lognormal(2.0 * ind(x[0] > 2.0) + x[0] * ind(x[0] < 2.0), 0.5); },
       [](CovariateView x) { return exponential(0.25 + (x[0] + 6.0) / 100.0); }},
      {8, 1, 0.0, 4.0,
       [](CovariateView x) { return lognormal(3.0 * ind(x[0] > 2.0) + 1.5 * x[0] * ind(x[0] < 2.0), 0.5); },
       [](CovariateView x) { return lognormal(2.0 + (2.0 - x[0]) / 50.0, 0.5); }},
      {9, 10, 0.0, 4.0, [](CovariateView x) { return lognormal(0.126 * (x[0] + std::sqrt(x[2] * x[4])) + 1.0, 0.5); },
       [](CovariateView x) { return exponential(x[9] / 10.0 + 1.0 / 20.0); }},
      {10, 10, 0.0, 4.0,
       [](CovariateView x) {
         return lognormal(0.126 * (x[0] + std::sqrt(x[2] * x[4])) + 1.0, (x[1] + 2.0) / 4.0);
       },
       [](CovariateView x) { return exponential(x[9] / 10.0 + 1.0 / 20.0); }},
  }};
}

std::string setting_tag(int id, Target target) {
  return "setting-" + std::to_string(id) + "/" + std::string(to_string(target));
}

}  // namespace

const SettingSpec& setting(int id) {
  static const auto registry = make_registry();
  if (id < 1 || id > kSettingCount) {
    throw std::invalid_argument("unknown setting id " + std::to_string(id) + " (expected 1..10)");
  }
  return registry[static_cast<std::size_t>(id - 1)];
}

double sample_law(const LawParams& law, RandomStream& stream) {
  if (law.kind == LawParams::Kind::exponential) return stream.exponential(law.rate);
  if (law.sigma == 0.0) return std::exp(law.mu);
  return std::exp(law.mu + law.sigma * stream.normal());
}

std::vector<LatentRecord> generate_latent(const SettingSpec& s, std::size_t n, const RandomStream& stream) {
  std::vector<LatentRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream r = stream.substream(i);
    LatentRecord rec;
    rec.x.resize(s.p);
    for (auto& v : rec.x) v = s.x_low + (s.x_high - s.x_low) * r.uniform();
    rec.t = sample_law(s.survival(rec.x), r);
    rec.c = sample_law(s.censoring(rec.x), r);
    out.push_back(std::move(rec));
  }
  return out;
}

Dataset apply_right_censoring(std::span<const LatentRecord> latent, std::size_t p) {
  Dataset d(p);
  for (const auto& rec : latent) d.add(rec.observe());
  return d;
}

double oracle_quantile(const SettingSpec& s, CovariateView x, double level) {
  if (x.size() != s.p) throw std::invalid_argument("covariate dimension does not match the setting");
  const LawParams law = s.survival(x);
  if (law.sigma == 0.0) return std::exp(law.mu);
  if (level <= 0.0) return 0.0;
  if (level >= 1.0) return kInfinity;
  return std::exp(law.mu + law.sigma * normal_quantile(level));
}

ConditionalModel true_censoring_model(const SettingSpec& s) {
  return ConditionalModel::analytic({setting_tag(s.id, Target::censoring), s.p, s.censoring}, Target::censoring);
}

ConditionalModel true_survival_model(const SettingSpec& s) {
  return ConditionalModel::analytic({setting_tag(s.id, Target::survival), s.p, s.survival}, Target::survival);
}

std::optional<AnalyticModel> resolve_setting_model(std::string_view tag) {
  constexpr std::string_view prefix = "setting-";
  if (!tag.starts_with(prefix)) return std::nullopt;
  tag.remove_prefix(prefix.size());
  int id = 0;
  const auto [ptr, ec] = std::from_chars(tag.data(), tag.data() + tag.size(), id);
  if (ec != std::errc() || id < 1 || id > kSettingCount) return std::nullopt;
  const std::string_view rest(ptr, static_cast<std::size_t>(tag.data() + tag.size() - ptr));
  const SettingSpec& s = setting(id);
  if (rest == "/survival") return AnalyticModel{setting_tag(id, Target::survival), s.p, s.survival};
  if (rest == "/censoring") return AnalyticModel{setting_tag(id, Target::censoring), s.p, s.censoring};
  return std::nullopt;
}

}  // namespace cosarc
