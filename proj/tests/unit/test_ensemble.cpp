#include "helpers.hpp"
#include "oracle/brute_force.hpp"

#include "sharp/ensemble.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sharp;

TEST(Lse, Examples) {
  EXPECT_NEAR(lse({0.2, 0.2, 0.2}, 0.2), 0.2, 1e-15);
  EXPECT_NEAR(lse({0.0, 0.0, 1.0}, 0.2), 0.2 * std::log((2.0 + std::exp(5.0)) / 3.0), 1e-15);
  EXPECT_NEAR(lse({0.0, 0.0, 1.0}, 0.2), 0.782955, 1e-6);
  EXPECT_NEAR(lse({0.0, 0.0, 1.0}, 100.0), oracle::lse({0.0, 0.0, 1.0}, 100.0), 1e-12);
  EXPECT_NEAR(lse({0.0, 0.0, 1.0}, 100.0), 1.0 / 3.0 + (2.0 / 9.0) / 200.0, 1e-5);
  EXPECT_THROW(lse({0.1}, 0.0), std::invalid_argument);
  EXPECT_THROW(lse(std::span<const double>{}, 0.2), std::invalid_argument);
}

TEST(Lse, BetweenMeanAndMaxAndMonotoneInTau) {
  std::mt19937 g(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    Eigen::Vector3d x(u(g), u(g), u(g));
    double prev = 2.0;
    for (double tau : {0.01, 0.05, 0.2, 1.0, 100.0}) {
      const double v = lse(x, tau);
      EXPECT_GE(v, x.mean() - 1e-12);
      EXPECT_LE(v, x.maxCoeff() + 1e-12);
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(Lse, NoOverflowAtTinyTau) {
  const double v = lse({0.0, 0.5, 1.0}, 1e-3);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1.0 + 1e-3 * std::log(1.0 / 3.0), 1e-12);
}

TEST(EnsembleCorpus, IdenticalJudgesGiveThatVector) {
  const auto scored = testing_helpers::scored_grid(1, 2, 3, [](int, int q, int) {
    return std::array<double, 4>{0.1 * q, 0.3, 0.5, 0.7};
  });
  const auto panel = ensemble_corpus(scored);
  EXPECT_NEAR(panel.z[0](1, 0), 0.1, 1e-15);
  EXPECT_NEAR(panel.z[0](0, 3), 0.7, 1e-15);
}

TEST(EnsembleCorpus, PerDimensionPooling) {
  const auto scored = testing_helpers::scored_grid(1, 1, 3, [](int, int, int j) {
    return std::array<double, 4>{j == 2 ? 1.0 : 0.0, 0.4, 0.1 * j, 0.0};
  });
  const auto h = ensemble_corpus(scored, 0.2).at(0, 0);
  EXPECT_NEAR(h.b_bar(), 0.782955, 1e-6);
  EXPECT_NEAR(h.f_bar(), 0.4, 1e-15);
  EXPECT_NEAR(h.e_bar(), oracle::lse({0.0, 0.1, 0.2}, 0.2), 1e-14);
  EXPECT_EQ(h.k_bar(), 0.0);
}

TEST(EnsembleCorpus, SingleJudgeInPartialModeIsIdentity) {
  auto scored = testing_helpers::scored_grid(1, 1, 3, [](int, int, int j) {
    return std::array<double, 4>{0.1 + 0.2 * j, 0.2, 0.3, 0.4};
  });
  scored.at(0, 0, 0).reset();
  scored.at(0, 0, 2).reset();
  const auto h = ensemble_corpus(scored).at(0, 0);
  EXPECT_NEAR(h.b_bar(), 0.3, 1e-15);
  EXPECT_NEAR(h.k_bar(), 0.4, 1e-15);

  scored.at(0, 0, 1).reset();
  EXPECT_THROW(ensemble_corpus(scored), ValidationError);
}

TEST(EnsembleCorpus, JudgeCountOtherThanThree) {
  const auto scored = testing_helpers::scored_grid(1, 1, 5, [](int, int, int j) {
    return std::array<double, 4>{0.2 * j, 0.0, 0.0, 0.0};
  });
  EXPECT_NEAR(ensemble_corpus(scored, 0.2).at(0, 0).b_bar(), oracle::lse({0, 0.2, 0.4, 0.6, 0.8}, 0.2), 1e-14);
}
