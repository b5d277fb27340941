#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <variant>

#include "cosarc/dataset.hpp"
#include "cosarc/distribution.hpp"
#include "cosarc/models.hpp"

namespace cosarc {

enum class ModelFamily { kaplan_meier, lognormal_aft, cox, knn_km, analytic };
enum class Target { survival, censoring };

std::string_view to_string(ModelFamily family);
std::string_view to_string(Target target);
ModelFamily parse_model_family(std::string_view name);
Target parse_target(std::string_view name);

struct ModelSpec {
  ModelFamily family = ModelFamily::lognormal_aft;
  std::size_t mask = 0;       // use only the first `mask` covariates; 0 = all
  std::size_t neighbors = 0;  // kNN-KM only; 0 = default_neighbor_count(n)
};

/// A fitted survival or censoring model. Immutable and cheap to copy.
class ConditionalModel {
 public:
  using Parameters = std::variant<std::shared_ptr<const KMCurve>, std::shared_ptr<const AFTModel>,
                                  std::shared_ptr<const CoxModel>, std::shared_ptr<const KnnKMModel>,
                                  std::shared_ptr<const AnalyticModel>>;

  // input_dim is the covariate length callers pass in; columns is how many
  // leading covariates the model reads (the covariate mask).
  ConditionalModel(Parameters parameters, Target target, std::size_t input_dim, std::size_t columns);

  static ConditionalModel kaplan_meier(KMCurve curve, Target target, std::size_t input_dim);
  static ConditionalModel aft(AFTModel model, Target target = Target::survival);
  static ConditionalModel cox(CoxModel model, Target target = Target::survival);
  static ConditionalModel knn_km(KnnKMModel model, Target target = Target::survival);
  static ConditionalModel analytic(AnalyticModel model, Target target);

  ModelFamily family() const;
  Target target() const { return target_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t columns() const { return columns_; }
  const Parameters& parameters() const { return parameters_; }

  // The model's conditional law at x. x must have at least columns() entries;
  // entries past columns() are ignored.
  ConditionalDistribution at(CovariateView x) const;

  double survival(CovariateView x, double t) const { return at(x).survival(t); }
  double density(CovariateView x, double t) const { return at(x).density(t); }
  double quantile(CovariateView x, double level) const { return at(x).quantile(level); }

  // Same model reading `input_dim` covariates of which only the first
  // columns() matter.
  ConditionalModel with_input_dim(std::size_t input_dim) const;

 private:
  Parameters parameters_;
  Target target_;
  std::size_t input_dim_;
  std::size_t columns_;
};

/// Fits the requested family. Censoring models are fitted on the dataset with
/// the event indicator flipped.
ConditionalModel fit_model(const Dataset& data, const ModelSpec& spec, Target target);

}  // namespace cosarc
