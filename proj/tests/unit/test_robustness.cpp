#include "helpers.hpp"
#include "oracle/brute_force.hpp"

#include "sharp/robustness.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sharp;
using testing_helpers::scored_grid;

namespace {

const std::vector<double> kTauGrid{0.15, 0.20, 0.25};
const std::vector<double> kAlphaGrid{0.90, 0.95, 0.975};

/// Model m has harm around 0.15 * (m + 1) on every dimension, with judge spread.
ScoredCorpus separated(int models, int prompts, int judges, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  return scored_grid(models, prompts, judges, [&](int m, int, int) {
    const double c = 0.15 * (m + 1);
    return std::array<double, 4>{c + u(g), c + u(g), c + u(g), c + u(g)};
  });
}

}  // namespace

TEST(Sweeps, SingleModelIsTriviallyStable) {
  const auto scored = separated(1, 20, 3, 1);
  const auto s = tau_sweep(scored, kTauGrid);
  for (const auto& p : s.points) {
    EXPECT_EQ(*p.kendall, 1.0);
    EXPECT_EQ(*p.spearman, 1.0);
  }
}

TEST(Sweeps, SeparatedModelsKeepTheirOrder) {
  const auto scored = separated(3, 60, 3, 2);
  const auto s = tau_sweep(scored, kTauGrid);
  ASSERT_EQ(s.points.size(), 3u);
  for (const auto& p : s.points) {
    EXPECT_EQ(*p.kendall, 1.0);
    // recompute directly
    const auto risk = compute_risk(ensemble_corpus(scored, p.value));
    for (Index m = 0; m < 3; ++m) EXPECT_NEAR(p.statistic(m), cvar(risk.per_model[m].cumulative, 0.95), 1e-12);
  }
}

TEST(Sweeps, CvarNonIncreasingInTau) {
  const auto scored = separated(3, 40, 3, 3);
  const std::vector<double> grid{0.05, 0.1, 0.2, 0.5, 1.0, 5.0};
  const auto s = tau_sweep(scored, grid);
  for (std::size_t i = 1; i < s.points.size(); ++i)
    for (Index m = 0; m < 3; ++m) EXPECT_LE(s.points[i].statistic(m), s.points[i - 1].statistic(m) + 1e-12);
}

TEST(Sweeps, AlphaExamples) {
  RiskPanel risk;
  risk.models = {"ramp", "flat"};
  for (int i = 1; i <= 40; ++i) risk.prompts.push_back("q" + std::to_string(i));
  ModelRisk ramp, flat;
  ramp.model_id = "ramp";
  flat.model_id = "flat";
  ramp.cumulative.resize(40);
  for (int i = 0; i < 40; ++i) ramp.cumulative(i) = i + 1;
  flat.cumulative = Eigen::VectorXd::Constant(40, 2.0);
  risk.per_model = {ramp, flat};

  const auto s = alpha_sweep(risk, kAlphaGrid);
  oracle::Vec forty;
  for (int i = 1; i <= 40; ++i) forty.push_back(i);
  EXPECT_EQ(s.points[0].statistic(0), oracle::cvar(forty, 0.90));
  EXPECT_EQ(s.points[1].statistic(0), 39.0);
  EXPECT_EQ(s.points[2].statistic(0), 39.5);
  for (const auto& p : s.points) EXPECT_EQ(p.statistic(1), 2.0);
  EXPECT_EQ(s.max_spread(1), 0.0);
  EXPECT_EQ(s.max_spread(0), oracle::cvar(forty, 0.975) - oracle::cvar(forty, 0.90));
}

TEST(Lojo, IdenticalJudgesAgreeFully) {
  const auto scored = scored_grid(4, 30, 3, [](int m, int q, int) {
    const double c = 0.1 + 0.2 * m + 0.001 * q;
    return std::array<double, 4>{c, c, c, c};
  });
  const auto lojo = leave_one_judge_out(scored);
  ASSERT_EQ(lojo.size(), 3u);
  for (const auto& e : lojo) EXPECT_EQ(*e.kendall, 1.0);
}

TEST(Lojo, DroppingConstantZeroJudgePreservesOrder) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  const auto scored = scored_grid(3, 40, 3, [&](int m, int, int j) {
    if (j == 0) return std::array<double, 4>{0, 0, 0, 0};
    const double c = 0.2 + 0.25 * m;
    return std::array<double, 4>{c + u(g), c + u(g), c + u(g), c + u(g)};
  });
  const auto lojo = leave_one_judge_out(scored);
  EXPECT_EQ(lojo[0].omitted_judge, "j0");
  EXPECT_EQ(*lojo[0].kendall, 1.0);
}

TEST(Lojo, TwoJudgesAndOneJudge) {
  const auto two = separated(3, 20, 2, 6);
  const auto lojo = leave_one_judge_out(two);
  ASSERT_EQ(lojo.size(), 2u);
  EXPECT_EQ(*lojo[0].kendall, 1.0);
  EXPECT_THROW(leave_one_judge_out(separated(3, 20, 1, 6)), std::invalid_argument);
}

TEST(Mad, Examples) {
  const std::vector<double> a{0.2, 0.4, 0.6}, b{0, 0, 1}, c{0.3, 0.3, 0.3};
  EXPECT_NEAR(mean_absolute_deviation(a), 0.133333, 1e-6);
  EXPECT_NEAR(mean_absolute_deviation(b), 0.444444, 1e-6);
  EXPECT_EQ(mean_absolute_deviation(c), 0.0);
}

TEST(Mad, DispersionMatchesOracle) {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto scored = scored_grid(2, 10, 3, [&](int, int, int) {
    return std::array<double, 4>{u(g), u(g), u(g), u(g)};
  });
  const auto mad = mad_dispersion(scored);
  for (int d = 0; d < 4; ++d) {
    oracle::Vec items;
    for (Index m = 0; m < 2; ++m)
      for (Index q = 0; q < 10; ++q) {
        oracle::Vec s;
        for (Index j = 0; j < 3; ++j) s.push_back(scored.at(m, q, j)->coords()[d]);
        items.push_back(oracle::mad(s));
      }
    EXPECT_EQ(mad[static_cast<std::size_t>(d)].items, 20);
    EXPECT_NEAR(mad[static_cast<std::size_t>(d)].mean, oracle::mean(items), 1e-12);
  }
}

TEST(Concordance, IdenticalAndMonotoneJudges) {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  std::vector<double> base(30);
  for (auto& v : base) v = u(g);
  const auto scored = scored_grid(1, 30, 3, [&](int, int q, int j) {
    const double v = base[static_cast<std::size_t>(q)];
    const double w = j == 2 ? v * v + 0.1 : v;  // judge 2 is a monotone transform
    return std::array<double, 4>{w, w, w, w};
  });
  const auto rep = judge_concordance(scored, 25);
  ASSERT_FALSE(rep.cells.empty());
  for (const auto& c : rep.cells) {
    EXPECT_FALSE(c.skipped);
    EXPECT_EQ(*c.tau, 1.0);
  }
}

TEST(Concordance, OverlapBelowThresholdIsSkipped) {
  const auto scored = separated(1, 24, 2, 10);
  const auto rep = judge_concordance(scored, 25);
  for (const auto& c : rep.cells) {
    EXPECT_TRUE(c.skipped);
    EXPECT_EQ(c.overlap, 24);
    EXPECT_FALSE(c.tau.has_value());
  }
  for (const auto& s : rep.summaries) EXPECT_FALSE(s.mean.has_value());
}

TEST(Dependence, EqualDimensionsGiveUnitRho) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  HarmMatrixd z(50, 4);
  for (Index i = 0; i < 50; ++i) {
    z(i, 0) = u(g);
    z(i, 1) = z(i, 0);
    z(i, 2) = u(g);
    z(i, 3) = u(g);
  }
  const auto row = independence_test("m", z, compute_model_risk("m", z));
  EXPECT_NEAR(*row.rho_all[0], 1.0, 1e-12);
}

TEST(Dependence, IndependentDimensionsNearZero) {
  std::mt19937_64 g(13);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  HarmMatrixd z(2000, 4);
  for (Index i = 0; i < z.size(); ++i) z.data()[i] = u(g);
  const auto row = independence_test("m", z, compute_model_risk("m", z));
  EXPECT_NEAR(*row.mean_all, 0.0, 0.05);
  EXPECT_EQ(row.defined_all, 6);
  for (std::size_t p = 0; p < 6; ++p) {
    oracle::Vec a, b;
    for (Index i = 0; i < 2000; ++i) {
      a.push_back(z(i, kDimensionPairs[p].first));
      b.push_back(z(i, kDimensionPairs[p].second));
    }
    EXPECT_NEAR(*row.rho_all[p], oracle::spearman(a, b), 1e-9);
  }
}

TEST(Baselines, IdenticalModelsHaveNoFlipsAndUndefinedCorrelations) {
  ModelRiskProfile p;
  p.model_id = "a";
  p.mu_L = 1.0;
  p.cvar_alpha = 2.0;
  auto q = p;
  q.model_id = "b";
  const auto rep = baseline_aggregates({p, q});
  EXPECT_TRUE(rep.flips.empty());
  for (const auto& c : rep.correlations) {
    EXPECT_FALSE(c.rho.has_value());
    EXPECT_FALSE(c.tau.has_value());
  }
}

TEST(Baselines, PlantedFlipIsTheOnlyOne) {
  // A: uniform moderate risk. B: mostly safe with rare extreme prompts.
  const int n = 200;
  HarmPanel harm;
  harm.models = {"A", "B", "C"};
  for (int i = 0; i < n; ++i) harm.prompts.push_back("q" + std::to_string(1000 + i));
  harm.z = {HarmMatrixd::Constant(n, 4, 0.25), HarmMatrixd::Constant(n, 4, 0.02), HarmMatrixd::Constant(n, 4, 0.95)};
  for (int i = 0; i < 20; ++i) harm.z[1].row(i).setConstant(0.9);
  const auto risk = compute_risk(harm);
  const auto profiles = profile_panel(harm, risk);
  ASSERT_GT(profiles[0].mu_L, profiles[1].mu_L);
  ASSERT_GT(profiles[1].cvar_alpha, profiles[0].cvar_alpha);

  const auto flips = decision_flips(baseline_aggregates(profiles).rows, {0.0, 1e9});
  ASSERT_EQ(flips.size(), 1u);
  EXPECT_EQ(flips[0].model_a, "A");
  EXPECT_EQ(flips[0].model_b, "B");
  EXPECT_EQ(flips[0].kind, FlipKind::order_disagreement);
}

TEST(Baselines, NearTieAmplificationUsesPublishedMagnitudes) {
  const std::vector<BaselineRow> rows{{"deepseek-chat", 1.296, 5.735, 0, 0, 0}, {"gpt-oss-120b", 1.209, 5.286, 0, 0, 0}};
  const auto flips = decision_flips(rows);
  ASSERT_EQ(flips.size(), 1u);
  EXPECT_EQ(flips[0].kind, FlipKind::near_tie_amplification);
  EXPECT_NEAR(flips[0].delta_mean, 0.087, 1e-9);
  EXPECT_NEAR(flips[0].delta_cvar, 0.449, 1e-9);
}
