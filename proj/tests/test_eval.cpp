#include "cosarc/metrics.hpp"
#include "cosarc/synthdata.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cosarc;

TEST_SUITE("eval") {
  TEST_CASE("coverage") {
    const std::vector<double> zeros{0, 0, 0}, times{1, 2, 3};
    CHECK(coverage(zeros, times) == 1.0);
    const std::vector<double> l{1, 3}, t{2, 2};
    CHECK(coverage(l, t) == 0.5);
    const std::vector<double> tie{2.0};
    CHECK(coverage(tie, tie) == 1.0);
    CHECK_THROWS(coverage(l, times));
  }

  TEST_CASE("coverage is invariant to a common increasing transform") {
    testing::Gen g(71);
    std::vector<double> l(200), t(200), lt(200), tt(200);
    for (std::size_t i = 0; i < 200; ++i) {
      l[i] = g.uniform(0, 3);
      t[i] = g.uniform(0, 3);
      lt[i] = std::exp(2 * l[i]) + 1;
      tt[i] = std::exp(2 * t[i]) + 1;
    }
    CHECK(coverage(l, t) == coverage(lt, tt));
  }

  TEST_CASE("coverage bounds: single points") {
    const std::vector<double> l{5}, t{4};
    const auto a = coverage_bounds(l, t, std::vector<bool>{true});
    CHECK(a.low == 0.0);
    CHECK(a.mid == 0.0);
    CHECK(a.upp == 0.0);
    const auto b = coverage_bounds(l, t, std::vector<bool>{false});
    CHECK(b.low == 0.0);
    CHECK(b.mid == 0.5);
    CHECK(b.upp == 1.0);
    CHECK_THROWS(coverage_bounds(l, t, std::vector<bool>{true, false}));
  }

  TEST_CASE("coverage bounds collapse without censoring and sandwich the truth") {
    testing::Gen g(72);
    std::vector<double> l(300), t(300);
    for (std::size_t i = 0; i < 300; ++i) {
      l[i] = g.uniform(0, 2);
      t[i] = g.uniform(0, 3);
    }
    const auto b = coverage_bounds(l, t, std::vector<bool>(300, true));
    CHECK(b.low == coverage(l, t));
    CHECK(b.upp == coverage(l, t));

    for (int rep = 0; rep < 20; ++rep) {
      const auto latent = generate_latent(setting(1 + rep % 10), 500,
                                          SeedSpec{static_cast<std::uint64_t>(rep), 0, Stage::simulate}.stream());
      std::vector<double> lpb, truth, obs;
      std::vector<bool> ev;
      for (const auto& r : latent) {
        lpb.push_back(g.uniform(0, 2) * std::min(r.t, r.c) * 1.5);
        truth.push_back(r.t);
        obs.push_back(std::min(r.t, r.c));
        ev.push_back(r.t < r.c);
      }
      const auto cb = coverage_bounds(lpb, obs, ev);
      const double cov = coverage(lpb, truth);
      CHECK(cb.low <= cov);
      CHECK(cov <= cb.upp);
      CHECK(cb.mid == doctest::Approx(0.5 * (cb.low + cb.upp)));
    }
  }

  TEST_CASE("normalized bounds") {
    const std::vector<double> o{1, 2, 3}, z{0, 0, 0}, twice{2, 4, 6};
    CHECK(normalized_lpb(o, o) == 1.0);
    CHECK(normalized_lpb(z, o) == 0.0);
    CHECK(normalized_lpb(twice, o) == 2.0);
    CHECK_THROWS(normalized_lpb(o, z));
  }

  TEST_CASE("stability coefficient of variation") {
    CHECK(stability_cv({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}) == 0.0);
    CHECK(stability_cv({{2}, {4}}) == doctest::Approx(std::sqrt(2.0) / 3.0));
    CHECK(stability_cv({{0, 2}, {0, 4}}) == doctest::Approx(std::sqrt(2.0) / 3.0 / 2.0));
    const std::vector<std::vector<double>> m{{1, 5, 2}, {3, 4, 2.5}, {2, 6, 1}};
    auto scaled = m;
    for (auto& row : scaled)
      for (auto& v : row) v *= 10;
    CHECK(stability_cv(scaled) == doctest::Approx(stability_cv(m)));
    CHECK_THROWS(stability_cv({{1, 2}}));
  }

  TEST_CASE("mean and standard error") {
    const std::vector<double> v{1, 2, 3, 4};
    const auto s = mean_se(v);
    CHECK(s.mean == 2.5);
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    const std::vector<double> one{7};
    CHECK(mean_se(one).se == 0.0);
  }
}
