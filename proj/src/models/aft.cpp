#include <Eigen/Dense>
#include <cmath>

#include "cosarc/models.hpp"
#include "cosarc/normal.hpp"

namespace cosarc {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

struct Design {
  Eigen::MatrixXd x;  // n x (p + 1), leading column of ones
  Eigen::VectorXd y;  // log times
  std::vector<bool> event;
};

Design make_design(const Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(data.p());
  Design d{Eigen::MatrixXd(n, p + 1), Eigen::VectorXd(n), {}};
  d.event.reserve(data.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = data[static_cast<std::size_t>(i)];
    d.x(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) d.x(i, j + 1) = r.x[static_cast<std::size_t>(j)];
    d.y(i) = std::log(r.t_tilde);
    d.event.push_back(r.event);
  }
  return d;
}

struct Evaluation {
  double loglik = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

// theta = (coefficients, log sigma). Hessian only when requested.
Evaluation evaluate(const Design& d, const Eigen::VectorXd& theta, bool with_hessian) {
  const Eigen::Index n = d.x.rows();
  const Eigen::Index k = d.x.cols();
  const double log_sigma = theta(k);
  const double sigma = std::exp(log_sigma);
  const Eigen::VectorXd eta = d.x * theta.head(k);

  Evaluation ev;
  Eigen::VectorXd g_eta(n), h_ee(n), h_es(n);
  double g_s = 0.0, h_ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = (d.y(i) - eta(i)) / sigma;
    if (d.event[static_cast<std::size_t>(i)]) {
      ev.loglik += -log_sigma - 0.5 * z * z - kLogSqrt2Pi - d.y(i);
      g_eta(i) = z / sigma;
      g_s += z * z - 1.0;
      h_ee(i) = -1.0 / (sigma * sigma);
      h_es(i) = -2.0 * z / sigma;
      h_ss += -2.0 * z * z;
    } else {
      ev.loglik += log_normal_sf(z);
      const double m = inverse_mills(z);
      const double dm = m * (m - z);
      g_eta(i) = m / sigma;
      g_s += m * z;
      h_ee(i) = -dm / (sigma * sigma);
      h_es(i) = -(z * dm + m) / sigma;
      h_ss += -z * (z * dm + m);
    }
  }
  ev.grad.resize(k + 1);
  ev.grad.head(k) = d.x.transpose() * g_eta;
  ev.grad(k) = g_s;
  if (with_hessian) {
    ev.hess.resize(k + 1, k + 1);
    ev.hess.topLeftCorner(k, k) = d.x.transpose() * h_ee.asDiagonal() * d.x;
    ev.hess.col(k).head(k) = d.x.transpose() * h_es;
    ev.hess.row(k).head(k) = ev.hess.col(k).head(k).transpose();
    ev.hess(k, k) = h_ss;
  }
  return ev;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

namespace aft {

double log_likelihood(const Dataset& data, std::span<const double> theta) {
  const Design d = make_design(data);
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  return evaluate(d, t, false).loglik;
}

std::vector<double> gradient(const Dataset& data, std::span<const double> theta) {
  const Design d = make_design(data);
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  return to_std(evaluate(d, t, false).grad);
}

}  // namespace aft

AFTModel fit_lognormal_aft(const Dataset& data) {
  if (data.empty()) throw FitError("lognormal AFT: empty dataset");
  if (data.event_count() == 0) throw FitError("lognormal AFT: no events, likelihood is unbounded");

  const Design d = make_design(data);
  const Eigen::Index k = d.x.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
  if (qr.rank() < k) throw FitError("singular design");

  // Least squares on log times is the exact MLE when nothing is censored and
  // a good start otherwise.
  Eigen::VectorXd theta(k + 1);
  theta.head(k) = qr.solve(d.y);
  const double rms = std::sqrt((d.y - d.x * theta.head(k)).squaredNorm() / static_cast<double>(d.x.rows()));
  theta(k) = std::log(std::max(rms, 1e-6));

  Evaluation ev = evaluate(d, theta, true);
  double lambda = 0.0;
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    const double gnorm = ev.grad.norm();
    if (gnorm <= kGradientTolerance) {
      AFTModel m;
      m.intercept = theta(0);
      m.beta.assign(theta.data() + 1, theta.data() + k);
      m.sigma = std::exp(theta(k));
      m.report = {iter, gnorm, ev.loglik};
      return m;
    }

    // Damped Newton: Levenberg shift when -H is not positive definite.
    const Eigen::MatrixXd neg_h = -ev.hess;
    Eigen::VectorXd step;
    for (;;) {
      Eigen::MatrixXd a = neg_h;
      a.diagonal().array() += lambda;
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      if (llt.info() == Eigen::Success) {
        step = llt.solve(ev.grad);
        break;
      }
      lambda = lambda == 0.0 ? 1e-6 * (1.0 + neg_h.diagonal().cwiseAbs().maxCoeff()) : lambda * 10.0;
      if (!std::isfinite(lambda)) throw FitError("lognormal AFT: Hessian breakdown", to_std(theta));
    }

    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd candidate = theta + step;
      Evaluation next = evaluate(d, candidate, false);
      // Near the optimum the objective change drops below rounding; a step
      // that shrinks the gradient without a measurable loss is still taken.
      const double slack = 1e-12 * (1.0 + std::abs(ev.loglik));
      if (std::isfinite(next.loglik) &&
          (next.loglik > ev.loglik || (next.loglik >= ev.loglik - slack && next.grad.norm() < gnorm))) {
        theta = candidate;
        ev = evaluate(d, theta, true);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    lambda *= 0.1;
    if (!improved) {
      // At the rounding floor of the objective; accept a near-stationary point.
      if (gnorm <= 1e-6 * std::max(1.0, static_cast<double>(data.size()) / 100.0)) {
        AFTModel m;
        m.intercept = theta(0);
        m.beta.assign(theta.data() + 1, theta.data() + k);
        m.sigma = std::exp(theta(k));
        m.report = {iter, gnorm, ev.loglik};
        return m;
      }
      throw FitError("lognormal AFT: line search failed", to_std(theta));
    }
  }
  throw FitError("lognormal AFT: no convergence in 200 iterations", to_std(theta));
}

}  // namespace cosarc
