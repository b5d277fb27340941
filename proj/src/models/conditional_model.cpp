#include "cosarc/conditional_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cosarc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot(const std::vector<double>& beta, CovariateView x) {
  return std::inner_product(beta.begin(), beta.end(), x.begin(), 0.0);
}

}  // namespace

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kaplan_meier: return "km";
    case ModelFamily::lognormal_aft: return "aft";
    case ModelFamily::cox: return "cox";
    case ModelFamily::knn_km: return "knn-km";
    case ModelFamily::analytic: return "analytic";
  }
  return "unknown";
}

std::string_view to_string(Target target) {
  return target == Target::survival ? "survival" : "censoring";
}

ModelFamily parse_model_family(std::string_view name) {
  for (auto f : {ModelFamily::kaplan_meier, ModelFamily::lognormal_aft, ModelFamily::cox, ModelFamily::knn_km,
                 ModelFamily::analytic}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown model family '" + std::string(name) + "' (expected km, aft, cox, knn-km)");
}

Target parse_target(std::string_view name) {
  if (name == "survival") return Target::survival;
  if (name == "censoring") return Target::censoring;
  throw std::invalid_argument("unknown model target '" + std::string(name) + "'");
}

ConditionalModel::ConditionalModel(Parameters parameters, Target target, std::size_t input_dim, std::size_t columns)
    : parameters_(std::move(parameters)), target_(target), input_dim_(input_dim), columns_(columns) {
  if (columns_ > input_dim_) throw std::invalid_argument("model reads more covariates than it is given");
}

ConditionalModel ConditionalModel::kaplan_meier(KMCurve curve, Target target, std::size_t input_dim) {
  return {std::make_shared<const KMCurve>(std::move(curve)), target, input_dim, 0};
}

ConditionalModel ConditionalModel::aft(AFTModel model, Target target) {
  const std::size_t p = model.beta.size();
  return {std::make_shared<const AFTModel>(std::move(model)), target, p, p};
}

ConditionalModel ConditionalModel::cox(CoxModel model, Target target) {
  const std::size_t p = model.beta.size();
  return {std::make_shared<const CoxModel>(std::move(model)), target, p, p};
}

ConditionalModel ConditionalModel::knn_km(KnnKMModel model, Target target) {
  const std::size_t p = model.p;
  return {std::make_shared<const KnnKMModel>(std::move(model)), target, p, p};
}

ConditionalModel ConditionalModel::analytic(AnalyticModel model, Target target) {
  const std::size_t p = model.p;
  return {std::make_shared<const AnalyticModel>(std::move(model)), target, p, p};
}

ModelFamily ConditionalModel::family() const {
  return std::visit(Overloaded{
                        [](const std::shared_ptr<const KMCurve>&) { return ModelFamily::kaplan_meier; },
                        [](const std::shared_ptr<const AFTModel>&) { return ModelFamily::lognormal_aft; },
                        [](const std::shared_ptr<const CoxModel>&) { return ModelFamily::cox; },
                        [](const std::shared_ptr<const KnnKMModel>&) { return ModelFamily::knn_km; },
                        [](const std::shared_ptr<const AnalyticModel>&) { return ModelFamily::analytic; },
                    },
                    parameters_);
}

ConditionalDistribution ConditionalModel::at(CovariateView x) const {
  if (x.size() < columns_) {
    throw std::invalid_argument("covariate vector has " + std::to_string(x.size()) + " entries, model needs " +
                                std::to_string(columns_));
  }
  const CovariateView used = x.first(columns_);
  using CD = ConditionalDistribution;
  return std::visit(
      Overloaded{
          [](const std::shared_ptr<const KMCurve>& c) { return CD(CD::Step{c}); },
          [used](const std::shared_ptr<const AFTModel>& m) {
            return CD(CD::Lognormal{m->intercept + dot(m->beta, used), m->sigma});
          },
          [used](const std::shared_ptr<const CoxModel>& m) {
            return CD(CD::ProportionalHazards{m, std::exp(dot(m->beta, used))});
          },
          [used](const std::shared_ptr<const KnnKMModel>& m) {
            return CD(CD::Step{std::make_shared<const KMCurve>(m->neighborhood_curve(used))});
          },
          [used](const std::shared_ptr<const AnalyticModel>& m) {
            const LawParams law = m->law(used);
            if (law.kind == LawParams::Kind::exponential) return CD(CD::Exponential{law.rate});
            return CD(CD::Lognormal{law.mu, law.sigma});
          },
      },
      parameters_);
}

ConditionalModel ConditionalModel::with_input_dim(std::size_t input_dim) const {
  return {parameters_, target_, input_dim, columns_};
}

ConditionalModel fit_model(const Dataset& data, const ModelSpec& spec, Target target) {
  if (data.empty()) throw FitError("cannot fit a model on an empty dataset");
  const std::size_t p = data.p();
  const std::size_t columns = spec.mask == 0 ? p : spec.mask;
  if (columns > p) throw std::invalid_argument("covariate mask exceeds the covariate dimension");

  const Dataset oriented = target == Target::censoring ? data.flipped() : data;
  const Dataset used = columns == p ? oriented : oriented.project(columns);

  switch (spec.family) {
    case ModelFamily::kaplan_meier:
      return ConditionalModel::kaplan_meier(fit_kaplan_meier(used), target, p);
    case ModelFamily::lognormal_aft:
      return ConditionalModel::aft(fit_lognormal_aft(used), target).with_input_dim(p);
    case ModelFamily::cox:
      return ConditionalModel::cox(fit_cox(used), target).with_input_dim(p);
    case ModelFamily::knn_km: {
      const std::size_t k = spec.neighbors == 0 ? default_neighbor_count(used.size())
                                                : std::min(spec.neighbors, used.size());
      return ConditionalModel::knn_km(fit_knn_km(used, k), target).with_input_dim(p);
    }
    case ModelFamily::analytic:
      break;
  }
  throw std::invalid_argument("analytic models are constructed, not fitted");
}

}  // namespace cosarc
