#pragma once

#include "sharp/ensemble.hpp"
#include "sharp/ingest.hpp"
#include "sharp/riskcore.hpp"
#include "sharp/robustness.hpp"
#include "sharp/statval.hpp"
#include "sharp/subindex.hpp"

#include <optional>
#include <vector>

namespace sharp {

struct PipelineConfig {
  double tau = kDefaultTau;
  double alpha = kDefaultAlpha;
  double epsilon = kDefaultEpsilon;
  SubIndexWeights weights;
  HarmCoordsd policy_weights = HarmCoordsd::Constant(0.25);

  Index boot = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double ci_level = 0.95;
  double holm_alpha = 0.05;

  std::vector<double> tau_grid{0.15, 0.20, 0.25};
  std::vector<double> alpha_grid{0.90, 0.95, 0.975};
  Index min_overlap = 25;
  FlipThresholds flips;
};

struct PipelineResult {
  ScoredCorpus scored;
  HarmPanel harm;
  RiskPanel risk;
  std::vector<ModelRiskProfile> profiles;
  PolicySummary policy;
};

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config = {});

/// Prompt-level analyses; parts needing two models or two prompts are empty
/// when the corpus is too small.
struct StatsBundle {
  BootstrapResult mean_ci;
  BootstrapResult cvar_ci;
  std::optional<TestResult> friedman;
  std::vector<PairwiseTest> wilcoxon;
  std::optional<VarianceDecomposition> variance;
};

StatsBundle run_stats(const PipelineResult& result, const PipelineConfig& config = {});

struct RobustnessBundle {
  std::optional<SweepReport> tau_sweep;
  std::optional<SweepReport> alpha_sweep;
  std::optional<AgreementReport> agreement;
  std::vector<DependenceRow> dependence;
  std::optional<BaselineReport> baseline;

  bool empty() const {
    return !tau_sweep && !alpha_sweep && !agreement && dependence.empty() && !baseline;
  }
};

RobustnessBundle run_robustness(const PipelineResult& result, const PipelineConfig& config = {});

}  // namespace sharp
