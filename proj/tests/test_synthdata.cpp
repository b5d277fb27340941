#include "cosarc/normal.hpp"
#include "cosarc/synthdata.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cosarc;

namespace {

// Censoring fraction of setting 3 measured once at n = 10^4 and frozen.
constexpr double kSetting3CensoredFraction = 0.781;

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = testing::mean(a), mb = testing::mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_SUITE("synthdata") {
  TEST_CASE("registry") {
    for (int id = 1; id <= kSettingCount; ++id) CHECK(setting(id).id == id);
    CHECK(setting(1).p == 100);
    CHECK(setting(5).p == 1);
    CHECK(setting(9).p == 10);
    CHECK_THROWS_WITH(setting(11), doctest::Contains("unknown setting id"));
    CHECK_THROWS(setting(0));
  }

  TEST_CASE("setting 3 log-time mean function") {
    const auto latent = generate_latent(setting(3), 100000, SeedSpec{1, 0, Stage::simulate}.stream());
    std::vector<double> resid;
    for (const auto& r : latent) {
      resid.push_back(std::log(r.t) - (std::log(2.0) + 1.0 + 0.55 * (r.x[0] * r.x[0] - r.x[2] * r.x[4])));
      for (double v : r.x) REQUIRE((v >= -1.0 && v <= 1.0));
    }
    CHECK(std::abs(testing::mean(resid)) <= 3.0 * testing::sample_sd(resid) / std::sqrt(100000.0));
  }

  TEST_CASE("setting 5 survival rises with X1") {
    // log T = 0.632 X1 + 2 Z with X1 ~ U(0, 4): the population correlation is
    // sqrt(v / (v + 4)) with v = 0.632^2 * 16 / 12, about 0.343.
    const double v = 0.632 * 0.632 * 16.0 / 12.0;
    const auto latent = generate_latent(setting(5), 10000, SeedSpec{2, 0, Stage::simulate}.stream());
    std::vector<double> lt, x;
    for (const auto& r : latent) {
      lt.push_back(std::log(r.t));
      x.push_back(r.x[0]);
    }
    CHECK(std::abs(correlation(lt, x) - std::sqrt(v / (v + 4.0))) <= 0.03);
  }

  TEST_CASE("generation is deterministic and prefix-stable") {
    const auto a = generate_latent(setting(7), 100, SeedSpec{3, 1, Stage::simulate}.stream());
    const auto b = generate_latent(setting(7), 100, SeedSpec{3, 1, Stage::simulate}.stream());
    const auto c = generate_latent(setting(7), 30, SeedSpec{3, 1, Stage::simulate}.stream());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].t == b[i].t);
      CHECK(a[i].c == b[i].c);
      if (i < c.size()) CHECK(c[i].t == a[i].t);
    }
  }

  TEST_CASE("right censoring view") {
    const std::vector<LatentRecord> l{{{0.0}, 2.0, 3.0}, {{0.0}, 3.0, 2.0}};
    const auto d = apply_right_censoring(l, 1);
    CHECK(d[0].t_tilde == 2.0);
    CHECK(d[0].event);
    CHECK(d[1].t_tilde == 2.0);
    CHECK_FALSE(d[1].event);

    const auto latent = generate_latent(setting(2), 500, SeedSpec{4, 0, Stage::simulate}.stream());
    const auto obs = apply_right_censoring(latent, setting(2).p);
    CHECK(obs.event_count() + (obs.size() - obs.event_count()) == 500);
    for (std::size_t i = 0; i < latent.size(); ++i) {
      CHECK(obs[i].t_tilde == std::min(latent[i].t, latent[i].c));
      CHECK(obs[i].event == (latent[i].t < latent[i].c));
    }
  }

  TEST_CASE("censoring fraction anchor") {
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      const auto d = apply_right_censoring(generate_latent(setting(3), 10000, SeedSpec{100, rep, Stage::simulate}.stream()),
                                           setting(3).p);
      const double frac = 1.0 - static_cast<double>(d.event_count()) / static_cast<double>(d.size());
      CHECK(std::abs(frac - kSetting3CensoredFraction) <= 0.02);
    }
  }

  TEST_CASE("oracle quantiles") {
    const auto& s3 = setting(3);
    const std::vector<double> zero(100, 0.0);
    CHECK(oracle_quantile(s3, zero, 0.5) == doctest::Approx(std::exp(std::log(2.0) + 1.0)));
    double prev = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double q = oracle_quantile(s3, zero, k / 100.0);
      CHECK(q > prev);
      prev = q;
    }
    std::vector<double> edge(100, 0.0);
    edge[0] = 1.0;
    edge[1] = 1.0;
    for (double level : {0.01, 0.1, 0.9}) CHECK(oracle_quantile(setting(1), edge, level) == doctest::Approx(std::exp(2.0)));
    CHECK_THROWS(oracle_quantile(s3, std::vector<double>(3, 0.0), 0.5));

    // sigma = 0 draws are exactly the point mass.
    RandomStream r(1);
    CHECK(sample_law(setting(1).survival(edge), r) == std::exp(2.0));
  }

  TEST_CASE("true censoring model") {
    const auto cens = true_censoring_model(setting(3));
    testing::Gen g(61);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> x(100);
      for (auto& v : x) v = g.uniform(-1, 1);
      CHECK(cens.survival(x, 2.5) == doctest::Approx(std::exp(-1.0)));
      CHECK(cens.quantile(x, 0.5) == doctest::Approx(std::log(2.0) / 0.4));
    }
    for (int id : {1, 3, 8}) {
      const auto m = true_censoring_model(setting(id));
      std::vector<double> x(setting(id).p);
      for (auto& v : x) v = g.uniform(setting(id).x_low, setting(id).x_high);
      const auto law = m.at(x);
      double total = 0.0, prev_t = 1e-10, prev_f = law.density(prev_t);
      for (double u = std::log(1e-10); u < std::log(1e5); u += 1e-4) {
        const double t = std::exp(u), f = law.density(t);
        total += 0.5 * (f + prev_f) * (t - prev_t);
        prev_t = t;
        prev_f = f;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
    const auto resolved = resolve_setting_model("setting-3/censoring");
    REQUIRE(resolved.has_value());
    CHECK(resolved->p == 100);
    CHECK_FALSE(resolve_setting_model("setting-12/censoring").has_value());
    CHECK_FALSE(resolve_setting_model("setting-3/other").has_value());
  }
}
