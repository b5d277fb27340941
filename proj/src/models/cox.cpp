#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cosarc/models.hpp"

namespace cosarc {

double CoxModel::baseline_cumhaz(double t) const {
  if (t <= 0.0 || knot_times.empty()) return 0.0;
  const auto it = std::lower_bound(knot_times.begin(), knot_times.end(), t);
  if (it == knot_times.end()) return cumulative_hazard.back() * t / knot_times.back();
  const auto j = static_cast<std::size_t>(it - knot_times.begin());
  const double t0 = j == 0 ? 0.0 : knot_times[j - 1];
  const double h0 = j == 0 ? 0.0 : cumulative_hazard[j - 1];
  return h0 + (cumulative_hazard[j] - h0) * (t - t0) / (knot_times[j] - t0);
}

double CoxModel::baseline_hazard(double t) const {
  if (t <= 0.0 || knot_times.empty()) return 0.0;
  const auto it = std::lower_bound(knot_times.begin(), knot_times.end(), t);
  if (it == knot_times.end()) return cumulative_hazard.back() / knot_times.back();
  const auto j = static_cast<std::size_t>(it - knot_times.begin());
  const double t0 = j == 0 ? 0.0 : knot_times[j - 1];
  const double h0 = j == 0 ? 0.0 : cumulative_hazard[j - 1];
  return (cumulative_hazard[j] - h0) / (knot_times[j] - t0);
}

double CoxModel::inverse_cumhaz(double h) const {
  if (h <= 0.0 || knot_times.empty()) return 0.0;
  if (!std::isfinite(h)) return kInfinity;
  const auto it = std::lower_bound(cumulative_hazard.begin(), cumulative_hazard.end(), h);
  if (it == cumulative_hazard.end()) return h * knot_times.back() / cumulative_hazard.back();
  const auto j = static_cast<std::size_t>(it - cumulative_hazard.begin());
  const double t0 = j == 0 ? 0.0 : knot_times[j - 1];
  const double h0 = j == 0 ? 0.0 : cumulative_hazard[j - 1];
  return t0 + (h - h0) / (cumulative_hazard[j] - h0) * (knot_times[j] - t0);
}

namespace {

// Records sorted by time with event groups; used by every partial-likelihood
// evaluation. Risk sets are suffixes of the sorted order.
struct SortedData {
  Eigen::MatrixXd x;
  std::vector<double> time;
  std::vector<bool> event;
  // Distinct event times with [first index in sorted order, number of events]
  struct Group {
    double time;
    std::size_t risk_start;
    std::vector<std::size_t> events;
  };
  std::vector<Group> groups;
};

SortedData sort_data(const Dataset& data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data[a].t_tilde < data[b].t_tilde; });
  SortedData s;
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(data.p());
  s.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = data[order[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j < p; ++j) s.x(i, j) = r.x[static_cast<std::size_t>(j)];
    s.time.push_back(r.t_tilde);
    s.event.push_back(r.event);
  }
  std::size_t i = 0;
  while (i < s.time.size()) {
    const std::size_t start = i;
    SortedData::Group g{s.time[i], start, {}};
    while (i < s.time.size() && s.time[i] == g.time) {
      if (s.event[i]) g.events.push_back(i);
      ++i;
    }
    if (!g.events.empty()) s.groups.push_back(std::move(g));
  }
  return s;
}

struct PartialEvaluation {
  double loglik = 0.0;
  Eigen::VectorXd score;
  Eigen::MatrixXd info;  // negative Hessian
};

PartialEvaluation evaluate(const SortedData& s, const Eigen::VectorXd& beta, bool with_info) {
  const Eigen::Index n = s.x.rows();
  const Eigen::Index p = s.x.cols();
  const Eigen::VectorXd eta = s.x * beta;
  const double shift = n > 0 ? eta.maxCoeff() : 0.0;
  const Eigen::VectorXd r = (eta.array() - shift).exp().matrix();

  PartialEvaluation ev;
  ev.score = Eigen::VectorXd::Zero(p);
  if (with_info) ev.info = Eigen::MatrixXd::Zero(p, p);

  // Risk sets are suffixes; sweep from the largest time down, accumulating
  // the risk-set sums and consuming each event group at its first index.
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
  Eigen::Index next = n;
  for (auto g = s.groups.rbegin(); g != s.groups.rend(); ++g) {
    const auto start = static_cast<Eigen::Index>(g->risk_start);
    for (; next > start; --next) {
      const Eigen::Index i = next - 1;
      const auto xi = s.x.row(i).transpose();
      s0 += r(i);
      s1 += r(i) * xi;
      if (with_info) s2.noalias() += r(i) * xi * xi.transpose();
    }
    const double d = static_cast<double>(g->events.size());
    const Eigen::VectorXd mean = s1 / s0;
    for (std::size_t i : g->events) {
      ev.loglik += eta(static_cast<Eigen::Index>(i)) - shift;
      ev.score += s.x.row(static_cast<Eigen::Index>(i)).transpose();
    }
    ev.loglik -= d * std::log(s0);
    ev.score -= d * mean;
    if (with_info) ev.info += d * (s2 / s0 - mean * mean.transpose());
  }
  return ev;
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

namespace cox {

double partial_log_likelihood(const Dataset& data, std::span<const double> beta) {
  return evaluate(sort_data(data), to_eigen(beta), false).loglik;
}

std::vector<double> score(const Dataset& data, std::span<const double> beta) {
  return to_std(evaluate(sort_data(data), to_eigen(beta), false).score);
}

}  // namespace cox

CoxModel fit_cox(const Dataset& data) {
  if (data.empty() || data.event_count() == 0) throw FitError("Cox: no events");
  const SortedData full = sort_data(data);
  const Eigen::Index p = full.x.cols();

  // Zero-variance columns make the partial likelihood flat in that direction.
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto col = full.x.col(j);
    if (col.maxCoeff() > col.minCoeff()) active.push_back(j);
  }
  SortedData s = full;
  s.x.resize(full.x.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t j = 0; j < active.size(); ++j) s.x.col(static_cast<Eigen::Index>(j)) = full.x.col(active[j]);

  const auto q = static_cast<Eigen::Index>(active.size());
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
  PartialEvaluation ev = evaluate(s, beta, true);
  const Eigen::VectorXd initial_info = ev.info.diagonal();
  int iter = 0;
  for (; iter < kMaxNewtonIterations; ++iter) {
    if (ev.score.norm() <= kGradientTolerance) break;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(ev.info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff())) {
      throw FitError("Cox: singular information matrix", to_std(beta));
    }
    Eigen::VectorXd step = ldlt.solve(ev.score);
    // Half the Newton decrement bounds the remaining gain in the concave
    // objective; below rounding level the score cannot shrink further.
    if (0.5 * ev.score.dot(step) <= 1e-13 * std::max(1.0, std::abs(ev.loglik))) break;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd candidate = beta + step;
      PartialEvaluation next = evaluate(s, candidate, true);
      if (std::isfinite(next.loglik) && next.loglik >= ev.loglik) {
        beta = candidate;
        ev = std::move(next);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (beta.norm() > 50.0) throw FitError("Cox: monotone likelihood (coefficients diverge)", to_std(beta));
    if (!improved) {
      if (ev.score.norm() <= 1e-6) break;
      throw FitError("Cox: line search failed", to_std(beta));
    }
  }
  if (iter == kMaxNewtonIterations) throw FitError("Cox: no convergence in 200 iterations", to_std(beta));
  // A maximizer at infinity flattens the objective: the information along
  // some coordinate collapses while the score vanishes.
  for (Eigen::Index j = 0; j < q; ++j) {
    if (ev.info(j, j) < 1e-6 * initial_info(j)) {
      throw FitError("Cox: monotone likelihood (coefficients diverge)", to_std(beta));
    }
  }

  CoxModel model;
  model.beta.assign(static_cast<std::size_t>(p), 0.0);
  for (std::size_t j = 0; j < active.size(); ++j) model.beta[static_cast<std::size_t>(active[j])] = beta(static_cast<Eigen::Index>(j));
  model.report = {iter, ev.score.norm(), ev.loglik};

  // Breslow baseline on the raw covariates.
  Eigen::VectorXd full_beta = to_eigen(model.beta);
  const Eigen::VectorXd risk = (full.x * full_beta).array().exp().matrix();
  std::vector<double> suffix(static_cast<std::size_t>(risk.size()) + 1, 0.0);
  for (Eigen::Index i = risk.size() - 1; i >= 0; --i) {
    suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + risk(i);
  }
  double h = 0.0;
  for (const auto& g : full.groups) {
    h += static_cast<double>(g.events.size()) / suffix[g.risk_start];
    model.knot_times.push_back(g.time);
    model.cumulative_hazard.push_back(h);
  }
  return model;
}

}  // namespace cosarc
