#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "cosarc/csv.hpp"
#include "cosarc/experiment.hpp"
#include "cosarc/metrics.hpp"

namespace cosarc {

namespace {

struct Split {
  Dataset train;
  Dataset calibration;
  Dataset test;
  std::vector<double> test_true_times;  // synthetic only
};

bool is_dr(Method m) { return m == Method::drcosarc_fixed || m == Method::drcosarc_adaptive; }

std::size_t grid_max(const ExperimentConfig& c, std::size_t fallback) {
  std::size_t m = fallback;
  for (double g : c.grid) m = std::max(m, static_cast<std::size_t>(g));
  return m;
}

Split synthetic_split(const ExperimentConfig& c, const SettingSpec& s, std::size_t rep) {
  const bool train_sweep = c.sweep == SweepAxis::train_size || c.sweep == SweepAxis::cens_train_size;
  const std::size_t n_train = train_sweep ? grid_max(c, c.n_train) : c.n_train;
  const std::size_t n_cal = c.sweep == SweepAxis::n_cal ? grid_max(c, c.n_cal) : c.n_cal;
  auto stream = [&](Stage stage) { return SeedSpec{c.seed, rep, stage}.stream(); };

  Split out;
  const auto train = generate_latent(s, n_train, stream(Stage::generate_train));
  const auto cal = generate_latent(s, n_cal, stream(Stage::generate_calibration));
  const auto test = generate_latent(s, c.n_test, stream(Stage::generate_test));
  out.train = apply_right_censoring(train, s.p);
  out.calibration = apply_right_censoring(cal, s.p);
  out.test = apply_right_censoring(test, s.p);
  for (const auto& r : test) out.test_true_times.push_back(r.t);
  return out;
}

Split real_split(const ExperimentConfig& c, const Dataset& data, std::size_t rep) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream stream = SeedSpec{c.seed, rep, Stage::split}.stream();
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  const auto n = static_cast<double>(data.size());
  const auto n_train = static_cast<std::size_t>(std::floor(c.split_train * n));
  const auto n_cal = static_cast<std::size_t>(std::floor(c.split_cal * n));
  const std::span<const std::size_t> all(order);
  Split out;
  out.train = data.subset(all.subspan(0, n_train));
  out.calibration = data.subset(all.subspan(n_train, n_cal));
  out.test = data.subset(all.subspan(n_train + n_cal));
  return out;
}

struct RepResult {
  std::vector<std::vector<ResultRow>> per_grid;  // [grid index][method]
  std::size_t failed = 0;
};

std::string failure_message(const std::exception& e) { return std::string("failed: ") + e.what(); }

RepResult run_rep(const ExperimentConfig& c, const Dataset* real, std::size_t rep) {
  const SettingSpec* s = c.setting ? &setting(*c.setting) : nullptr;
  const std::size_t p = s ? s->p : real->p();
  const Split split = s ? synthetic_split(c, *s, rep) : real_split(c, *real, rep);

  const std::vector<double> grid = c.sweep == SweepAxis::none ? std::vector<double>{0.0} : c.grid;
  const std::size_t default_mask = c.censoring.mask == 0 ? std::min<std::size_t>(p, 10) : c.censoring.mask;

  std::vector<double> oracle;
  if (s) {
    for (const auto& r : split.test) oracle.push_back(oracle_quantile(*s, r.x, c.alpha));
  }
  std::vector<double> observed;
  std::vector<bool> events;
  for (const auto& r : split.test) {
    observed.push_back(r.t_tilde);
    events.push_back(r.event);
  }

  // The survival model depends on the grid only for train-size sweeps.
  std::optional<ConditionalModel> shared_surv;
  std::string shared_surv_error;
  auto fit_surv = [&](const Dataset& train) {
    if (c.true_survival_model) return true_survival_model(*s);
    return fit_model(train, c.survival, Target::survival);
  };
  const Dataset base_train = s ? split.train.head(std::min(c.n_train, split.train.size())) : split.train;
  if (c.sweep != SweepAxis::train_size) {
    try {
      shared_surv = fit_surv(base_train);
    } catch (const std::exception& e) {
      shared_surv_error = e.what();
    }
  }

  RepResult result;
  for (double g : grid) {
    const auto gi = static_cast<std::size_t>(g);
    std::vector<ResultRow> rows;
    auto fail_all = [&](const std::string& status) {
      for (Method m : c.methods) rows.push_back({g, rep, m, status, {}, {}, {}, 0.0, {}, 0.0, {}, {}, {}});
      ++result.failed;
    };

    const Dataset calibration = c.sweep == SweepAxis::n_cal ? split.calibration.head(std::min(gi, split.calibration.size()))
                                                            : split.calibration;
    ModelSpec cens_spec = c.censoring;
    cens_spec.mask = c.sweep == SweepAxis::p1 ? gi : default_mask;
    Dataset cens_train = base_train;
    if (c.sweep == SweepAxis::cens_train_size || c.sweep == SweepAxis::train_size) {
      cens_train = split.train.head(std::min(gi, split.train.size()));
    }

    std::optional<ConditionalModel> surv = shared_surv;
    std::optional<ConditionalModel> cens;
    try {
      if (c.sweep == SweepAxis::train_size) surv = fit_surv(cens_train);
      if (!surv) throw std::runtime_error(shared_surv_error);
      cens = c.true_censoring_model ? true_censoring_model(*s) : fit_model(cens_train, cens_spec, Target::censoring);
    } catch (const std::exception& e) {
      fail_all(failure_message(e));
      result.per_grid.push_back(std::move(rows));
      continue;
    }

    const ImputedDataset imputed = impute_dataset(calibration, *cens, SeedSpec{c.seed, rep, Stage::impute}.stream());
    MethodContext ctx;
    ctx.surv = &*surv;
    ctx.cens = &*cens;
    ctx.calibration = &calibration;
    ctx.imputed = &imputed;
    ctx.setting = s;
    ctx.alpha = c.alpha;
    ctx.candidate_family = c.candidate_family;
    ctx.weight_floor = c.weight_floor;
    ctx.c0 = c.c0;
    ctx.km_stream = SeedSpec{c.seed, rep, Stage::km_decensor}.stream();

    for (Method m : c.methods) {
      ResultRow row;
      row.grid = g;
      row.rep = rep;
      row.method = m;
      const auto start = std::chrono::steady_clock::now();
      try {
        MethodOutput out = run_method(m, ctx, split.test);
        row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (s) {
          row.coverage = coverage(out.lpbs, split.test_true_times);
          row.normalized_lpb = normalized_lpb(out.lpbs, oracle);
        }
        row.bounds = coverage_bounds(out.lpbs, observed, events);
        row.mean_lpb = std::accumulate(out.lpbs.begin(), out.lpbs.end(), 0.0) / static_cast<double>(out.lpbs.size());
        if (is_dr(m)) row.dr_active_frac = static_cast<double>(out.dr_active) / static_cast<double>(out.lpbs.size());
        if (c.keep_lpbs) {
          row.lpbs = std::move(out.lpbs);
          row.q_alpha = std::move(out.q_alpha);
          row.true_times = split.test_true_times;
        }
      } catch (const std::exception& e) {
        row.status = failure_message(e);
      }
      rows.push_back(std::move(row));
    }
    result.per_grid.push_back(std::move(rows));
  }
  return result;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  std::optional<Dataset> real;
  std::size_t p = 0;
  if (config.dataset) {
    try {
      real = read_dataset_csv(std::filesystem::path(*config.dataset));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    p = real->p();
  } else if (config.setting && *config.setting >= 1 && *config.setting <= kSettingCount) {
    p = setting(*config.setting).p;
  }
  validate(config, p);

  std::vector<RepResult> results(config.reps);
  std::size_t workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = std::min(workers, config.reps);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t rep = next++; rep < config.reps; rep = next++) {
        results[rep] = run_rep(config, real ? &*real : nullptr, rep);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentReport report;
  report.config = config;
  const std::size_t grid_points = config.sweep == SweepAxis::none ? 1 : config.grid.size();
  report.total_reps = config.reps * grid_points;
  for (std::size_t gi = 0; gi < grid_points; ++gi) {
    for (auto& r : results) {
      for (auto& row : r.per_grid[gi]) report.rows.push_back(std::move(row));
    }
  }
  for (const auto& r : results) report.failed_reps += r.failed;
  return report;
}

}  // namespace cosarc
