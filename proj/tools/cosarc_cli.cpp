#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cosarc/conditional_model.hpp"
#include "cosarc/csv.hpp"
#include "cosarc/experiment.hpp"
#include "cosarc/impute.hpp"
#include "cosarc/predict.hpp"
#include "cosarc/serialize.hpp"
#include "cosarc/synthdata.hpp"

using namespace cosarc;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kFitFailure = 3 };

Dataset read_data(const std::string& path) {
  try {
    return read_dataset_csv(std::filesystem::path(path));
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ConditionalModel read_model(const std::string& path) {
  try {
    return load_model(path, resolve_setting_model);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

template <class F>
void with_output(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

struct SimulateArgs {
  int setting = 3;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::size_t rep = 0;
  std::string latent, observed;
};

int simulate(const SimulateArgs& a) {
  const SettingSpec& s = setting(a.setting);
  const auto latent = generate_latent(s, a.n, SeedSpec{a.seed, a.rep, Stage::simulate}.stream());
  if (!a.latent.empty()) with_output(a.latent, [&](std::ostream& o) { write_latent_csv(o, latent); });
  if (!a.observed.empty() || a.latent.empty()) {
    with_output(a.observed, [&](std::ostream& o) { write_dataset_csv(o, apply_right_censoring(latent, s.p)); });
  }
  return kOk;
}

struct FitArgs {
  std::string data, out, family = "aft", target = "survival";
  std::size_t mask = 0, neighbors = 0;
};

int fit(const FitArgs& a) {
  const Dataset data = read_data(a.data);
  ModelSpec spec;
  Target target;
  try {
    spec.family = parse_model_family(a.family);
    target = parse_target(a.target);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (spec.family == ModelFamily::analytic) throw ConfigError("analytic models cannot be fitted");
  if (a.mask > data.p()) throw ConfigError("mask exceeds the covariate dimension");
  spec.mask = a.mask;
  spec.neighbors = a.neighbors;
  const ConditionalModel model = fit_model(data, spec, target);
  with_output(a.out, [&](std::ostream& o) { o << model_to_json(model).dump(2) << '\n'; });
  return kOk;
}

struct ImputeArgs {
  std::string data, cens, dump;
  std::uint64_t seed = 1;
};

int impute(const ImputeArgs& a) {
  const Dataset data = read_data(a.data);
  const ConditionalModel cens = read_model(a.cens);
  if (cens.input_dim() != data.p()) throw ConfigError("dimension mismatch between censoring model and data");
  const ImputedDataset imputed = impute_dataset(data, cens, SeedSpec{a.seed, 0, Stage::impute}.stream());
  with_output(a.dump, [&](std::ostream& o) { write_imputed_csv(o, imputed); });
  std::cerr << "imputed " << imputed.diagnostics.sampled << " censoring times";
  if (imputed.diagnostics.tail_clips > 0) std::cerr << " (" << imputed.diagnostics.tail_clips << " at the tail floor)";
  std::cerr << '\n';
  return kOk;
}

struct PredictArgs {
  std::string surv, cens, calibration, data, out, method = "drcosarc-adaptive", family = "quantile-level";
  double alpha = 0.1, weight_floor = kDefaultWeightFloor;
  std::optional<double> c0;
  std::optional<int> setting;
  std::uint64_t seed = 1;
};

int predict(const PredictArgs& a) {
  PredictRequest req;
  req.method = parse_method(a.method);
  req.alpha = a.alpha;
  req.seed = a.seed;
  req.setting = a.setting;
  req.weight_floor = a.weight_floor;
  req.c0 = a.c0;
  try {
    req.candidate_family = parse_candidate_family(a.family);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!a.surv.empty()) req.surv = read_model(a.surv);
  if (!a.cens.empty()) req.cens = read_model(a.cens);
  if (!a.calibration.empty()) req.calibration = read_data(a.calibration);
  const Dataset data = read_data(a.data);
  const auto lpbs = predict_lpbs(req, data);
  with_output(a.out, [&](std::ostream& o) { write_lpb_csv(o, lpbs); });
  return kOk;
}

struct ExperimentArgs {
  std::string config, out = "results", dataset, sweep;
  std::optional<int> setting;
  std::vector<std::string> methods;
  std::vector<double> grid;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps, n_train, n_cal, n_test, threads;
};

int experiment(const ExperimentArgs& a) {
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  if (a.setting) {
    c.setting = a.setting;
    c.dataset.reset();
  }
  if (!a.dataset.empty()) {
    c.dataset = a.dataset;
    c.setting.reset();
  }
  if (!c.setting && !c.dataset) c.setting = 3;
  if (!a.methods.empty()) {
    c.methods.clear();
    for (const auto& m : a.methods) c.methods.push_back(parse_method(m));
  }
  if (!a.sweep.empty()) c.sweep = parse_sweep_axis(a.sweep);
  if (!a.grid.empty()) c.grid = a.grid;
  if (a.alpha) c.alpha = *a.alpha;
  if (a.seed) c.seed = *a.seed;
  if (a.reps) c.reps = *a.reps;
  if (a.n_train) c.n_train = *a.n_train;
  if (a.n_cal) c.n_cal = *a.n_cal;
  if (a.n_test) c.n_test = *a.n_test;
  if (a.threads) c.threads = *a.threads;

  const ExperimentReport report = run_experiment(c);
  write_report(a.out, report);
  std::cerr << "wrote " << (std::filesystem::path(a.out) / "results.csv").string() << " and summary.json";
  if (report.failed_reps > 0) std::cerr << "; " << report.failed_reps << " of " << report.total_reps << " reps failed";
  std::cerr << '\n';
  const double failed = static_cast<double>(report.failed_reps) / static_cast<double>(report.total_reps);
  return failed > c.failure_threshold ? kFitFailure : kOk;
}

struct ReportArgs {
  std::string results, out;
};

int report(const ReportArgs& a) {
  std::ifstream in(a.results);
  if (!in) throw ConfigError("cannot read " + a.results);
  std::vector<ResultRow> rows;
  try {
    rows = read_results_csv(in);
  } catch (const std::exception& e) {
    throw ConfigError(a.results + ": " + e.what());
  }
  with_output(a.out, [&](std::ostream& o) { o << summarize(rows).dump(2) << '\n'; });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrated lower prediction bounds for right-censored survival times"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Draw a synthetic dataset");
  cmd_sim->add_option("--setting", sim.setting, "Setting id (1-10)")->check(CLI::Range(1, kSettingCount));
  cmd_sim->add_option("-n,--n", sim.n, "Number of records")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--seed", sim.seed, "Root seed");
  cmd_sim->add_option("--rep", sim.rep, "Repetition index");
  cmd_sim->add_option("--latent", sim.latent, "Write x..,t,c,time,event here");
  cmd_sim->add_option("--observed", sim.observed, "Write x..,time,event here (default: stdout)");

  FitArgs fa;
  auto* cmd_fit = app.add_subcommand("fit", "Fit a survival or censoring model");
  cmd_fit->add_option("--data", fa.data, "Training CSV")->required();
  cmd_fit->add_option("--family", fa.family, "km, aft, cox or knn-km");
  cmd_fit->add_option("--target", fa.target, "survival or censoring");
  cmd_fit->add_option("--mask", fa.mask, "Use only the first p1 covariates (0: all)");
  cmd_fit->add_option("--neighbors", fa.neighbors, "kNN-KM neighbour count (0: default)");
  cmd_fit->add_option("-o,--out", fa.out, "Model JSON (default: stdout)");

  ImputeArgs ia;
  auto* cmd_imp = app.add_subcommand("impute", "Impute latent censoring times for a calibration set");
  cmd_imp->add_option("--data", ia.data, "Calibration CSV")->required();
  cmd_imp->add_option("--cens", ia.cens, "Censoring model JSON")->required();
  cmd_imp->add_option("--seed", ia.seed, "Root seed");
  cmd_imp->add_option("--dump-imputed", ia.dump, "Write x..,time,c_hat here (default: stdout)");

  PredictArgs pa;
  auto* cmd_pred = app.add_subcommand("predict", "Lower prediction bounds for new records");
  cmd_pred->add_option("--data", pa.data, "CSV of records to bound")->required();
  cmd_pred->add_option("--method", pa.method, "Calibration method");
  cmd_pred->add_option("--surv", pa.surv, "Survival model JSON");
  cmd_pred->add_option("--cens", pa.cens, "Censoring model JSON");
  cmd_pred->add_option("--calibration", pa.calibration, "Calibration CSV");
  cmd_pred->add_option("--setting", pa.setting, "Synthetic setting (oracle only)");
  cmd_pred->add_option("--alpha", pa.alpha, "Miscoverage level")->check(CLI::Range(0.0, 1.0));
  cmd_pred->add_option("--seed", pa.seed, "Root seed");
  cmd_pred->add_option("--candidate-family", pa.family, "quantile-level or shift");
  cmd_pred->add_option("--weight-floor", pa.weight_floor, "Floor on estimated censoring survival");
  cmd_pred->add_option("--c0", pa.c0, "Fixed cutoff (default: median censoring time)");
  cmd_pred->add_option("-o,--out", pa.out, "Output CSV (default: stdout)");

  ExperimentArgs ea;
  auto* cmd_exp = app.add_subcommand("experiment", "Run a Monte Carlo coverage experiment");
  cmd_exp->add_option("--config", ea.config, "JSON configuration");
  cmd_exp->add_option("--setting", ea.setting, "Synthetic setting");
  cmd_exp->add_option("--dataset", ea.dataset, "Real-data CSV");
  cmd_exp->add_option("--method", ea.methods, "Method (repeatable)");
  cmd_exp->add_option("--alpha", ea.alpha, "Miscoverage level");
  cmd_exp->add_option("--seed", ea.seed, "Root seed");
  cmd_exp->add_option("--reps", ea.reps, "Repetitions");
  cmd_exp->add_option("--sweep", ea.sweep, "none, cens-train-size, train-size, p1 or n-cal");
  cmd_exp->add_option("--grid", ea.grid, "Sweep grid values");
  cmd_exp->add_option("--n-train", ea.n_train, "Training size");
  cmd_exp->add_option("--n-cal", ea.n_cal, "Calibration size");
  cmd_exp->add_option("--n-test", ea.n_test, "Test size");
  cmd_exp->add_option("--threads", ea.threads, "Worker threads (0: all cores)");
  cmd_exp->add_option("-o,--out", ea.out, "Output directory");

  ReportArgs ra;
  auto* cmd_rep = app.add_subcommand("report", "Aggregate a results.csv into per-method summaries");
  cmd_rep->add_option("--results", ra.results, "results.csv")->required();
  cmd_rep->add_option("-o,--out", ra.out, "Summary JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*cmd_sim) return simulate(sim);
    if (*cmd_fit) return fit(fa);
    if (*cmd_imp) return impute(ia);
    if (*cmd_pred) return predict(pa);
    if (*cmd_exp) return experiment(ea);
    if (*cmd_rep) return report(ra);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const FitError& e) {
    std::cerr << "model fit failed: " << e.what() << '\n';
    return kFitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
