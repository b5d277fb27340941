#include <map>

#include "cosarc/baselines.hpp"
#include "cosarc/metrics.hpp"
#include "cosarc/normal.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cosarc;

namespace {

ConditionalModel point_mass_survival() { return ConditionalModel::aft(AFTModel{0.0, {1.0}, 0.0, {}}); }

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("uncalibrated bound is the model quantile") {
    const auto m = ConditionalModel::aft(AFTModel{0.0, {0.0}, 1.0, {}});
    const std::vector<double> x{0.3};
    CHECK(uncalibrated_lpb(m, 0.1, x) == doctest::Approx(0.2776).epsilon(1e-4));
    CHECK(uncalibrated_lpb(m, 0.1, x) == m.quantile(x, 0.1));
  }

  TEST_CASE("naive CQR on a hand-computable instance") {
    const double q = std::log(5.0);
    Dataset d(1);
    d.add({{q}, 6.0, true});
    d.add({{q}, 5.0, false});
    d.add({{q}, 3.0, true});
    const auto pred = naive_cqr(d, point_mass_survival(), 0.25);
    CHECK(pred.eta() == doctest::Approx(2.0));
    CHECK(pred.lpb(std::vector<double>{std::log(7.0)}) == doctest::Approx(5.0));
    CHECK(pred.lpb(std::vector<double>{std::log(1.5)}) == 0.0);

    testing::Gen g(51);
    const auto data = testing::random_dataset(g, 100, 1);
    const auto m = ConditionalModel::aft(AFTModel{0.5, {0.6}, 0.7, {}});
    const auto p = naive_cqr(data, m, 0.1);
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x{g.uniform(-1, 1)};
      if (p.eta() >= 0.0) CHECK(p.lpb(x) <= m.quantile(x, 0.1));
      CHECK(p.lpb(x) >= 0.0);
    }
  }

  TEST_CASE("KM decensoring without censoring equals naive CQR") {
    testing::Gen g(52);
    Dataset d(1);
    for (int i = 0; i < 80; ++i) d.add({{g.uniform(-1, 1)}, std::exp(g.normal()), true});
    const auto m = ConditionalModel::aft(AFTModel{0.0, {0.5}, 1.0, {}});
    const auto a = naive_cqr(d, m, 0.1);
    const auto b = km_decensor(d, m, 0.1, RandomStream(5));
    CHECK(a.eta() == b.eta());
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x{g.uniform(-1, 1)};
      CHECK(naive_cqr_lpb(d, m, 0.1, x) == km_decensor_lpb(d, m, 0.1, x, RandomStream(6)));
    }
  }

  TEST_CASE("decensored times exceed the censoring times") {
    testing::Gen g(53);
    const auto d = testing::random_dataset(g, 300, 1, 0.8);
    DecensorDiagnostics diag;
    const auto t = km_decensored_times(d, RandomStream(7), &diag);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i].event) {
        CHECK(t[i] == d[i].t_tilde);
      } else {
        CHECK(t[i] > d[i].t_tilde);
      }
    }
    CHECK(diag.sampled == d.size() - d.event_count());

    // All censored: KM never drops, draws collapse to the largest time.
    Dataset all(0);
    for (int i = 1; i <= 5; ++i) all.add({{}, 1.0 * i, false});
    DecensorDiagnostics flat;
    const auto u = km_decensored_times(all, RandomStream(8), &flat);
    for (std::size_t i = 0; i < 4; ++i) CHECK(u[i] == 5.0);
    CHECK(u[4] > 5.0);
    CHECK(flat.sampled == 5);
  }

  TEST_CASE("conditional KM sampler reproduces the conditional step masses") {
    const KMCurve km{{1.0, 2.0, 3.0, 4.0}, {0.8, 0.5, 0.3, 0.1}, 5.0};
    // Given T > 1.5 (S = 0.8): masses 0.3, 0.2, 0.2 at 2, 3, 4 and the
    // remaining 0.1 beyond the last knot.
    const std::map<double, double> expected{{2.0, 0.375}, {3.0, 0.25}, {4.0, 0.25}, {5.0, 0.125}};
    RandomStream s(9);
    const int n = 100000;
    std::map<double, int> counts;
    for (int i = 0; i < n; ++i) ++counts[sample_conditional_km(km, 1.5, s)];
    CHECK(counts.size() == expected.size());
    for (const auto& [v, p] : expected) {
      const double freq = static_cast<double>(counts[v]) / n;
      CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
    }

    // Conditioning exactly at a knot excludes that knot.
    RandomStream s2(10);
    for (int i = 0; i < 1000; ++i) CHECK(sample_conditional_km(km, 2.0, s2) > 2.0);
  }

  TEST_CASE("oracle bounds") {
    const std::vector<double> zero(100, 0.0);
    CHECK(oracle_lpb(setting(3), 0.1, zero) ==
          doctest::Approx(std::exp(std::log(2.0) + 1.0 + normal_quantile(0.1))).epsilon(1e-9));
    CHECK(oracle_lpb(setting(3), 0.1, zero) == doctest::Approx(1.509).epsilon(1e-3));
    std::vector<double> x(100, 0.0);
    x[0] = 1.0;
    CHECK(oracle_lpb(setting(2), 0.1, x) == doctest::Approx(2.392).epsilon(1e-3));

    for (int id : {1, 2, 3, 7}) {
      const auto& s = setting(id);
      const auto latent = generate_latent(s, 10000, SeedSpec{90, 0, Stage::generate_test}.stream());
      std::vector<double> l, t;
      for (const auto& r : latent) {
        l.push_back(oracle_lpb(s, 0.1, r.x));
        t.push_back(r.t);
      }
      CHECK(std::abs(coverage(l, t) - 0.9) <= 0.01);
    }
  }

  TEST_CASE("uncalibrated bound with the true law covers at the nominal rate") {
    const auto& s = setting(3);
    const auto truth = true_survival_model(s);
    const auto latent = generate_latent(s, 10000, SeedSpec{91, 0, Stage::generate_test}.stream());
    std::vector<double> l, t;
    for (const auto& r : latent) {
      l.push_back(uncalibrated_lpb(truth, 0.1, r.x));
      t.push_back(r.t);
    }
    CHECK(std::abs(coverage(l, t) - 0.9) <= 0.01);
  }

  TEST_CASE("baselines are deterministic") {
    testing::Gen g(54);
    const auto d = testing::random_dataset(g, 100, 1, 0.6);
    const auto m = ConditionalModel::aft(AFTModel{0.5, {0.6}, 0.7, {}});
    const std::vector<double> x{0.2};
    CHECK(km_decensor_lpb(d, m, 0.1, x, RandomStream(3)) == km_decensor_lpb(d, m, 0.1, x, RandomStream(3)));
  }
}
