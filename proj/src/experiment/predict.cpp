#include "cosarc/predict.hpp"

#include <ostream>
#include <string>

#include "cosarc/csv.hpp"

namespace cosarc {

namespace {

void check_dim(const ConditionalModel& model, std::size_t p, std::string_view role) {
  if (model.input_dim() != p) {
    throw ConfigError("dimension mismatch: " + std::string(role) + " model expects " +
                      std::to_string(model.input_dim()) + " covariates, data has " + std::to_string(p));
  }
}

}  // namespace

std::vector<double> predict_lpbs(const PredictRequest& req, const Dataset& data) {
  if (!(req.alpha > 0.0 && req.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const std::size_t p = data.p();
  MethodContext ctx;
  ctx.alpha = req.alpha;
  ctx.candidate_family = req.candidate_family;
  ctx.weight_floor = req.weight_floor;
  ctx.c0 = req.c0;
  ctx.km_stream = SeedSpec{req.seed, 0, Stage::km_decensor}.stream();

  if (req.method == Method::oracle) {
    if (!req.setting) throw ConfigError("oracle requires a synthetic setting");
    ctx.setting = &setting(*req.setting);
    if (ctx.setting->p != p) throw ConfigError("dimension mismatch: setting and data differ in covariate count");
    return run_method(req.method, ctx, data).lpbs;
  }

  if (!req.surv) throw ConfigError("method " + std::string(to_string(req.method)) + " needs a survival model");
  check_dim(*req.surv, p, "survival");
  ctx.surv = &*req.surv;

  const bool needs_calibration = req.method != Method::uncalibrated;
  const bool needs_cens = req.method == Method::drcosarc_fixed || req.method == Method::drcosarc_adaptive;
  if (needs_calibration) {
    if (!req.calibration) throw ConfigError("method " + std::string(to_string(req.method)) + " needs calibration data");
    if (req.calibration->p() != p) throw ConfigError("dimension mismatch: calibration and test data differ");
    ctx.calibration = &*req.calibration;
  }
  std::optional<ImputedDataset> imputed;
  if (needs_cens) {
    if (!req.cens) throw ConfigError("method " + std::string(to_string(req.method)) + " needs a censoring model");
    check_dim(*req.cens, p, "censoring");
    ctx.cens = &*req.cens;
    imputed = impute_dataset(*req.calibration, *req.cens, SeedSpec{req.seed, 0, Stage::impute}.stream());
    ctx.imputed = &*imputed;
  }
  return run_method(req.method, ctx, data).lpbs;
}

void write_lpb_csv(std::ostream& out, std::span<const double> lpbs) {
  out << "row_id,lpb\n";
  for (std::size_t i = 0; i < lpbs.size(); ++i) out << i << ',' << format_double(lpbs[i]) << '\n';
}

}  // namespace cosarc
