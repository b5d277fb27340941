#include <stdexcept>
#include <string>

#include "cosarc/baselines.hpp"
#include "cosarc/experiment.hpp"

namespace cosarc {

namespace {

template <class T>
const T& require(const T* ptr, Method method, std::string_view what) {
  if (!ptr) throw std::invalid_argument(std::string(to_string(method)) + " needs " + std::string(what));
  return *ptr;
}

template <class Predictor>
MethodOutput run_dr(const Predictor& predictor, const ConditionalModel& surv, double alpha, const Dataset& test) {
  MethodOutput out;
  out.diagnostics = predictor.diagnostics();
  for (const auto& r : test) {
    const double preliminary = predictor.preliminary(r.x);
    const double q = surv.quantile(r.x, alpha);
    const double lpb = dr_adjust(preliminary, q);
    if (q < preliminary) ++out.dr_active;
    out.lpbs.push_back(lpb);
    out.q_alpha.push_back(q);
  }
  return out;
}

}  // namespace

MethodOutput run_method(Method method, const MethodContext& ctx, const Dataset& test) {
  MethodOutput out;
  if (method == Method::oracle) {
    const SettingSpec& s = ctx.setting ? *ctx.setting : throw std::invalid_argument("oracle requires a synthetic setting");
    for (const auto& r : test) out.lpbs.push_back(oracle_lpb(s, ctx.alpha, r.x));
    return out;
  }

  const ConditionalModel& surv = require(ctx.surv, method, "a survival model");
  switch (method) {
    case Method::uncalibrated:
      for (const auto& r : test) {
        out.q_alpha.push_back(uncalibrated_lpb(surv, ctx.alpha, r.x));
        out.lpbs.push_back(out.q_alpha.back());
      }
      return out;
    case Method::naive_cqr: {
      const auto predictor = naive_cqr(require(ctx.calibration, method, "calibration data"), surv, ctx.alpha);
      for (const auto& r : test) out.lpbs.push_back(predictor.lpb(r.x));
      return out;
    }
    case Method::km_decensor: {
      const auto predictor =
          km_decensor(require(ctx.calibration, method, "calibration data"), surv, ctx.alpha, ctx.km_stream);
      for (const auto& r : test) out.lpbs.push_back(predictor.lpb(r.x));
      return out;
    }
    case Method::drcosarc_fixed: {
      const ImputedDataset& imputed = require(ctx.imputed, method, "an imputed calibration set");
      const ConditionalModel& cens = require(ctx.cens, method, "a censoring model");
      const double c0 = ctx.c0 ? *ctx.c0 : default_cutoff(require(ctx.calibration, method, "calibration data"));
      const FixedCutoffPredictor predictor(imputed, {c0, ctx.alpha, surv, cens, ctx.weight_floor});
      return run_dr(predictor, surv, ctx.alpha, test);
    }
    case Method::drcosarc_adaptive: {
      const ImputedDataset& imputed = require(ctx.imputed, method, "an imputed calibration set");
      const ConditionalModel& cens = require(ctx.cens, method, "a censoring model");
      const AdaptivePredictor predictor(imputed, {ctx.alpha, surv, cens, ctx.candidate_family, ctx.weight_floor});
      return run_dr(predictor, surv, ctx.alpha, test);
    }
    case Method::oracle:
      break;
  }
  throw std::logic_error("unhandled method");
}

}  // namespace cosarc
