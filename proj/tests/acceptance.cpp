// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cosarc/conformal.hpp"
#include "cosarc/experiment.hpp"
#include "cosarc/quantile.hpp"
#include "test_support.hpp"

using namespace cosarc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every synthetic report produced here feeds the two pointwise criteria.
std::vector<ExperimentReport> g_reports;

ExperimentReport run(ExperimentConfig c) {
  c.keep_lpbs = true;
  c.threads = 0;
  auto r = run_experiment(c);
  g_reports.push_back(r);
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Mean coverage of one method at one grid point; failed reps are counted
// and excluded.
struct MethodSummary {
  double coverage = 0.0;
  double normalized = 0.0;
  std::size_t ok = 0, failed = 0;
};

MethodSummary summarize_method(const ExperimentReport& r, Method m, double grid = 0.0) {
  MethodSummary s;
  for (const auto& row : r.rows) {
    if (row.method != m || row.grid != grid) continue;
    if (!row.ok()) {
      ++s.failed;
      continue;
    }
    ++s.ok;
    s.coverage += *row.coverage;
    s.normalized += row.normalized_lpb.value_or(0.0);
  }
  if (s.ok > 0) {
    s.coverage /= static_cast<double>(s.ok);
    s.normalized /= static_cast<double>(s.ok);
  }
  return s;
}

ExperimentConfig synthetic(int id, std::vector<Method> methods, std::size_t reps, std::uint64_t seed) {
  ExperimentConfig c;
  c.setting = id;
  c.methods = std::move(methods);
  c.reps = reps;
  c.seed = seed;
  return c;
}

// 1. Oracle bounds cover at the nominal rate.
Outcome oracle_coverage() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (int id : {1, 2, 3}) {
    auto c = synthetic(id, {Method::oracle}, 5, 11);
    // The oracle needs no fitted models; exact laws skip fitting on the
    // small training sets.
    c.true_survival_model = c.true_censoring_model = true;
    c.n_train = c.n_cal = 50;
    c.n_test = 10000;
    const auto r = run(c);
    double lo = 1.0, hi = 0.0;
    for (const auto& row : r.rows) {
      if (!row.ok()) return {false, "setting " + std::to_string(id) + ": " + row.status};
      lo = std::min(lo, *row.coverage);
      hi = std::max(hi, *row.coverage);
      ok = ok && std::abs(*row.coverage - 0.9) <= 0.01;
    }
    detail += fmt("setting %d coverage in [%.4f, %.4f]; ", id, lo, hi);
  }
  const double secs = seconds_since(start);
  ok = ok && secs < 10.0;
  return {ok, detail + fmt("%.1f s (limit 10 s)", secs)};
}

// 2 and 5 share the setting-3 run with fitted models.
ExperimentReport g_setting3;

Outcome adaptive_setting3() {
  const auto start = std::chrono::steady_clock::now();
  g_setting3 = run(synthetic(3, {Method::drcosarc_adaptive, Method::naive_cqr}, 20, 1));
  const double secs = seconds_since(start);
  const auto s = summarize_method(g_setting3, Method::drcosarc_adaptive);
  const bool ok = s.failed == 0 && s.coverage >= 0.87 && s.coverage <= 0.93 && secs < 300.0;
  return {ok, fmt("mean coverage %.4f over %zu reps (%zu failed), %.1f s (limit 300 s)", s.coverage, s.ok, s.failed, secs)};
}

// 3. Exact censoring law and exact quantiles.
Outcome exact_laws() {
  auto c = synthetic(3, {Method::drcosarc_fixed, Method::drcosarc_adaptive}, 50, 1);
  c.true_censoring_model = true;
  c.true_survival_model = true;
  c.n_train = 50;
  const auto r = run(c);
  const auto f = summarize_method(r, Method::drcosarc_fixed);
  const auto a = summarize_method(r, Method::drcosarc_adaptive);
  return {f.ok == 50 && a.ok == 50 && f.coverage >= 0.88 && a.coverage >= 0.88,
          fmt("fixed %.4f, adaptive %.4f (threshold 0.88)", f.coverage, a.coverage)};
}

// 4. Imputed censoring times follow C | C > T~.
Outcome imputation_law() {
  const auto& s = setting(3);
  int passing = 0;
  std::string ps;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = apply_right_censoring(generate_latent(s, 5000, SeedSpec{seed, 0, Stage::generate_calibration}.stream()), s.p);
    const auto imputed = impute_dataset(data, true_censoring_model(s), SeedSpec{seed, 0, Stage::impute}.stream());
    RandomStream fresh = SeedSpec{seed, 1, Stage::simulate}.stream();
    std::vector<double> a, b;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!data[i].event) continue;
      a.push_back(imputed[i].c_hat);
      // Exponential censoring: the excess over T~ is again exponential.
      b.push_back(data[i].t_tilde + fresh.exponential(0.4));
    }
    const double p = testing::ks_two_sample_p(a, b);
    passing += p > 0.01;
    ps += fmt("%.3f ", p);
  }
  return {passing >= 9, fmt("%d/10 seeds with p > 0.01 (p = %s)", passing, ps.c_str())};
}

// 5. Naive CQR over-covers with smaller bounds than the adaptive method.
Outcome naive_comparison() {
  const auto n = summarize_method(g_setting3, Method::naive_cqr);
  const auto a = summarize_method(g_setting3, Method::drcosarc_adaptive);
  return {n.ok == 20 && n.coverage >= 0.90 && n.normalized < a.normalized,
          fmt("naive coverage %.4f, normalized bound naive %.4f vs adaptive %.4f", n.coverage, n.normalized,
              a.normalized)};
}

// 6. More censoring-model training data helps the adaptive method.
Outcome censoring_sample_size() {
  auto c = synthetic(1, {Method::drcosarc_adaptive, Method::uncalibrated}, 20, 1);
  c.sweep = SweepAxis::cens_train_size;
  c.grid = {100, 300, 1000};
  const auto r = run(c);
  std::string detail = "adaptive";
  for (double g : c.grid) detail += fmt(" %g:%.4f", g, summarize_method(r, Method::drcosarc_adaptive, g).coverage);
  const double lo = summarize_method(r, Method::drcosarc_adaptive, 100).coverage;
  const double hi = summarize_method(r, Method::drcosarc_adaptive, 1000).coverage;
  const double unc = summarize_method(r, Method::uncalibrated, 1000).coverage;
  return {hi - lo >= 0.02 && hi >= unc, detail + fmt("; gain %.4f (need 0.02); uncalibrated %.4f", hi - lo, unc)};
}

// 7. Weighted quantile against a brute-force scan, with dyadic masses so
// every cumulative sum is exact.
Outcome quantile_brute_force() {
  testing::Gen g(7);
  int mismatches = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = g.integer(1, 25);
    constexpr int kUnits = 1 << 12;
    std::vector<Atom> atoms;
    int used = 0;
    for (int i = 0; i < n; ++i) {
      const double v = g.coin(0.1) ? kInfinity : static_cast<double>(g.integer(-6, 6)) * 0.25;
      const int k = i + 1 == n ? kUnits - used : std::min(kUnits - used, g.integer(0, 2 * kUnits / n));
      used += k;
      atoms.push_back({v, static_cast<double>(k) / kUnits});
    }
    const DiscreteDistribution d(atoms);
    for (double level : {g.uniform(1e-9, 1.0), g.uniform(1e-9, 1.0), 1.0}) {
      double brute = kInfinity;
      for (const auto& cand : atoms) {
        double mass = 0.0;
        for (const auto& a : atoms) mass += a.value <= cand.value ? a.mass : 0.0;
        if (mass >= level) brute = std::min(brute, cand.value);
      }
      mismatches += weighted_quantile(d, level) != brute;
    }
  }
  return {mismatches == 0, fmt("%d mismatches in 3000 queries", mismatches)};
}

// 8. Breakpoint grid against a dense grid on setting-3 calibration sets.
Outcome breakpoint_vs_dense() {
  const auto& s = setting(3);
  const auto surv = true_survival_model(s);
  const auto cens = true_censoring_model(s);
  const AdaptiveCalibrator cal{0.1, surv, cens, CandidateFamily::quantile_level, kDefaultWeightFloor};
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto data = apply_right_censoring(generate_latent(s, 300, SeedSpec{seed, 0, Stage::generate_calibration}.stream()), s.p);
    const auto imputed = impute_dataset(data, cens, SeedSpec{seed, 0, Stage::impute}.stream());
    const auto pts = prepare_points(imputed, surv, cens, cal.alpha);
    const double a_grid = select_threshold(pts, cal, breakpoint_grid(pts, cal));
    std::vector<double> dense, est;
    for (int k = 0; k <= 500; ++k) {
      dense.push_back(k / 500.0);
      est.push_back(miscoverage_hat(dense.back(), pts, cal));
    }
    worst = std::max(worst, std::abs(select_running_sup(dense, est, cal.alpha) - a_grid));
  }
  return {worst <= 1.0 / 500.0 + 1e-12, fmt("largest gap %.5f (spacing 0.002)", worst)};
}

// 9. Fitted parameters against grid maximization, and analytic gradients
// against finite differences.
double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (a[j] - b[j]) * (a[j] - b[j]);
    den += b[j] * b[j];
  }
  return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x) {
  const double h = 1e-5;
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    auto a = x, b = x;
    a[j] += h;
    b[j] -= h;
    g[j] = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

// Coarse grid, then a fine grid of spacing 1e-4 around the coarse winner.
std::pair<double, double> grid_argmax_2d(const std::function<double(double, double)>& f) {
  double bx = 0, by = 0, best = -kInfinity;
  auto scan = [&](double x0, double x1, double y0, double y1, double step) {
    for (double x = x0; x <= x1; x += step) {
      for (double y = y0; y <= y1; y += step) {
        const double v = f(x, y);
        if (v > best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
  };
  scan(-3.0, 4.0, -3.0, 2.0, 0.02);
  const double cx = bx, cy = by;
  scan(cx - 0.03, cx + 0.03, cy - 0.03, cy + 0.03, 1e-4);
  return {bx, by};
}

Outcome fit_oracles() {
  testing::Gen g(9);
  double aft_gap = 0.0, cox_gap = 0.0, grad_err = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    Dataset d(0);
    for (int i = 0; i < 20; ++i) {
      const double t = std::exp(0.5 + 0.8 * g.normal());
      const double c = std::exp(1.0 + 0.8 * g.normal());
      d.add({{}, std::min(t, c), t < c});
    }
    const auto m = fit_lognormal_aft(d);
    const auto [mu, ls] = grid_argmax_2d([&](double a, double b) { return aft::log_likelihood(d, std::vector<double>{a, b}); });
    aft_gap = std::max({aft_gap, std::abs(mu - m.intercept), std::abs(ls - std::log(m.sigma))});

    Dataset x(1);
    for (int i = 0; i < 20; ++i) {
      const double v = g.uniform(-1, 1);
      x.add({{v}, -std::log(g.uniform()) / std::exp(0.8 * v), g.coin(0.8)});
    }
    double best_b = 0.0, best = -kInfinity;
    for (double b = -10.0; b <= 10.0; b += 1e-4) {
      const double v = cox::partial_log_likelihood(x, std::vector<double>{b});
      if (v > best) {
        best = v;
        best_b = b;
      }
    }
    cox_gap = std::max(cox_gap, std::abs(fit_cox(x).beta[0] - best_b));

    const auto wide = testing::random_dataset(g, 60, 3);
    const std::vector<double> theta{g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1),
                                    g.uniform(-1, 0.5)};
    grad_err = std::max(grad_err, relative_error(aft::gradient(wide, theta),
                                                 central_difference([&](const std::vector<double>& th) {
                                                   return aft::log_likelihood(wide, th);
                                                 }, theta)));
    const std::vector<double> beta{g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)};
    grad_err = std::max(grad_err, relative_error(cox::score(wide, beta),
                                                 central_difference([&](const std::vector<double>& b) {
                                                   return cox::partial_log_likelihood(wide, b);
                                                 }, beta)));
  }
  return {aft_gap <= 1e-3 && cox_gap <= 1e-3 && grad_err <= 1e-4,
          fmt("AFT gap %.2e, Cox gap %.2e, gradient relative error %.2e", aft_gap, cox_gap, grad_err)};
}

// 10. Observable coverage bounds sandwich the true coverage.
Outcome sandwich() {
  std::size_t rows = 0, violations = 0;
  for (const auto& r : g_reports) {
    for (const auto& row : r.rows) {
      if (!row.ok()) continue;
      ++rows;
      violations += !(row.bounds.low <= *row.coverage && *row.coverage <= row.bounds.upp);
    }
  }
  return {violations == 0 && rows > 0, fmt("%zu violations in %zu method runs", violations, rows)};
}

// 11. The final bound never exceeds the uncalibrated quantile.
Outcome capped_by_quantile() {
  std::size_t points = 0, violations = 0, active = 0;
  for (const auto& r : g_reports) {
    for (const auto& row : r.rows) {
      if (!row.ok() || row.q_alpha.empty()) continue;
      for (std::size_t i = 0; i < row.lpbs.size(); ++i) {
        ++points;
        violations += row.lpbs[i] > row.q_alpha[i];
      }
      if (row.dr_active_frac) active += static_cast<std::size_t>(std::llround(*row.dr_active_frac * row.lpbs.size()));
    }
  }
  std::size_t dr_points = 0;
  for (const auto& r : g_reports)
    for (const auto& row : r.rows)
      if (row.ok() && row.dr_active_frac) dr_points += row.lpbs.size();
  return {violations == 0 && points > 0,
          fmt("%zu violations in %zu test points; quantile cap active at %.4f of calibrated points", violations, points,
              dr_points ? static_cast<double>(active) / static_cast<double>(dr_points) : 0.0)};
}

// 12. Adaptive bounds vary less across imputation draws than fixed ones.
Outcome imputation_stability() {
  const auto& s = setting(3);
  double fixed_sum = 0.0, adaptive_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto gen = [&](std::size_t n, Stage st) {
      return apply_right_censoring(generate_latent(s, n, SeedSpec{seed, 0, st}.stream()), s.p);
    };
    const auto train = gen(1000, Stage::generate_train);
    const auto cal = gen(1000, Stage::generate_calibration);
    const auto test = gen(500, Stage::generate_test);
    const auto surv = fit_model(train, {ModelFamily::lognormal_aft, 0, 0}, Target::survival);
    const auto cens = fit_model(train, {ModelFamily::knn_km, std::min<std::size_t>(s.p, 10), 0}, Target::censoring);
    const double c0 = default_cutoff(cal);
    std::vector<std::vector<double>> fixed, adaptive;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
      const auto imputed = impute_dataset(cal, cens, SeedSpec{seed, rep, Stage::impute}.stream());
      const FixedCutoffPredictor f(imputed, {c0, 0.1, surv, cens, kDefaultWeightFloor});
      const AdaptivePredictor a(imputed, {0.1, surv, cens, CandidateFamily::quantile_level, kDefaultWeightFloor});
      std::vector<double> fl, al;
      for (const auto& r : test.records()) {
        fl.push_back(f.lpb(r.x));
        al.push_back(a.lpb(r.x));
      }
      fixed.push_back(std::move(fl));
      adaptive.push_back(std::move(al));
    }
    fixed_sum += stability_cv(fixed);
    adaptive_sum += stability_cv(adaptive);
  }
  return {adaptive_sum <= fixed_sum, fmt("mean cv adaptive %.4f, fixed %.4f", adaptive_sum / 5, fixed_sum / 5)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"oracle coverage", oracle_coverage},
      {"adaptive coverage, setting 3", adaptive_setting3},
      {"exact censoring law and quantiles", exact_laws},
      {"imputation law", imputation_law},
      {"naive CQR comparison", naive_comparison},
      {"censoring training size sweep", censoring_sample_size},
      {"weighted quantile brute force", quantile_brute_force},
      {"breakpoint grid vs dense grid", breakpoint_vs_dense},
      {"fit and gradient oracles", fit_oracles},
      {"coverage sandwich", sandwich},
      {"bound capped by model quantile", capped_by_quantile},
      {"imputation stability", imputation_stability},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
