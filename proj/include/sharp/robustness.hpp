#pragma once

#include "sharp/common.hpp"
#include "sharp/ensemble.hpp"
#include "sharp/riskcore.hpp"
#include "sharp/statval.hpp"
#include "sharp/subindex.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sharp {

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

struct SweepPoint {
  double value;
  Eigen::VectorXd statistic;  // CVaR(L) per model
  std::optional<double> kendall;   // vs. reference ordering; empty if undefined
  std::optional<double> spearman;
};

struct SweepReport {
  std::string parameter;  // "tau" or "alpha"
  double reference = 0.0;
  std::vector<std::string> models;
  Eigen::VectorXd reference_statistic;
  std::vector<SweepPoint> points;
  Eigen::VectorXd max_spread;  // per model, max - min across the grid
};

/// Rank agreement of two per-model statistics. One model is trivially 1.0;
/// all-tied statistics are undefined.
std::pair<std::optional<double>, std::optional<double>> ordering_agreement(
    const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Re-runs ensembling and risk profiling for every tau in the grid.
SweepReport tau_sweep(const ScoredCorpus& scored, std::span<const double> grid,
                      double reference = kDefaultTau, double alpha = kDefaultAlpha,
                      double epsilon = kDefaultEpsilon);

SweepReport alpha_sweep(const RiskPanel& risk, std::span<const double> grid,
                        double reference = kDefaultAlpha);

// ---------------------------------------------------------------------------
// Judge agreement
// ---------------------------------------------------------------------------

struct LojoEntry {
  std::string omitted_judge;
  Index num_models;
  std::optional<double> kendall;
  std::optional<double> p_value;
};

/// Leave-one-judge-out CVaR ranking stability. Throws std::invalid_argument if K < 2.
std::vector<LojoEntry> leave_one_judge_out(const ScoredCorpus& scored, double tau = kDefaultTau,
                                           double alpha = kDefaultAlpha,
                                           double epsilon = kDefaultEpsilon);

/// Mean absolute deviation around the mean.
double mean_absolute_deviation(std::span<const double> scores);

struct MadSummary {
  Dimension dimension;
  Index items = 0;
  Index skipped = 0;  // items with fewer than two judges
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over items
};

std::array<MadSummary, 4> mad_dispersion(const ScoredCorpus& scored);

struct ConcordanceCell {
  std::string model;
  Dimension dimension;
  std::string judge_a;
  std::string judge_b;
  Index overlap = 0;
  std::optional<double> tau;  // empty if skipped or undefined
  bool skipped = false;       // overlap below threshold
};

struct ConcordanceSummary {
  Dimension dimension;
  std::string judge_a;
  std::string judge_b;
  Index num_models = 0;
  Index skipped = 0;
  Index undefined = 0;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> std;
};

struct ConcordanceReport {
  Index min_overlap = 25;
  std::vector<ConcordanceCell> cells;
  std::vector<ConcordanceSummary> summaries;
};

ConcordanceReport judge_concordance(const ScoredCorpus& scored, Index min_overlap = 25);

struct AgreementReport {
  std::array<MadSummary, 4> mad;
  std::vector<LojoEntry> lojo;
  ConcordanceReport concordance;
};

// ---------------------------------------------------------------------------
// Dimension dependence
// ---------------------------------------------------------------------------

inline constexpr std::array<std::pair<int, int>, 6> kDimensionPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct DependenceRow {
  std::string model;
  std::array<std::optional<double>, 6> rho_all;
  std::array<std::optional<double>, 6> rho_tail;
  std::optional<double> mean_all;
  std::optional<double> mean_tail;
  Index defined_all = 0;
  Index defined_tail = 0;
  Index num_prompts = 0;
  std::vector<Index> tail;  // the L tail set used for the slice
};

DependenceRow independence_test(const std::string& model, const HarmMatrixd& z,
                                const ModelRisk& risk, double alpha = kDefaultAlpha);
std::vector<DependenceRow> independence_test(const HarmPanel& harm, const RiskPanel& risk,
                                             double alpha = kDefaultAlpha);

// ---------------------------------------------------------------------------
// Baseline aggregates and decision flips
// ---------------------------------------------------------------------------

struct BaselineRow {
  std::string model;
  double mean_L;
  double cvar_L;
  double cvar_radius;
  double cvar_max;
  double mean_any_harm;
};

struct AggregateCorrelation {
  std::string aggregate_a;
  std::string aggregate_b;
  std::optional<double> rho;
  std::optional<double> tau;
  std::optional<double> rho_p_value;
};

enum class FlipKind { order_disagreement, near_tie_amplification };

struct DecisionFlip {
  std::string model_a;
  std::string model_b;
  double delta_mean;  // mean_L(a) - mean_L(b)
  double delta_cvar;  // cvar_L(a) - cvar_L(b)
  FlipKind kind;
};

struct FlipThresholds {
  double mean = 0.1;  // |delta mean L| below this counts as a near tie
  double cvar = 0.4;  // |delta CVaR| above this counts as amplified
};

struct BaselineReport {
  std::vector<BaselineRow> rows;
  std::vector<AggregateCorrelation> correlations;
  std::vector<DecisionFlip> flips;
  FlipThresholds thresholds;
};

BaselineReport baseline_aggregates(const std::vector<ModelRiskProfile>& profiles,
                                   const FlipThresholds& thresholds = {});

/// Model pairs ordered one way by mean L and the other way by CVaR(L), plus
/// near-tie pairs whose CVaR gap is large.
std::vector<DecisionFlip> decision_flips(const std::vector<BaselineRow>& rows,
                                         const FlipThresholds& thresholds = {});

}  // namespace sharp
