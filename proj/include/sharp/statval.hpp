#pragma once

#include "sharp/common.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sharp {

// ---------------------------------------------------------------------------
// Distribution tails
// ---------------------------------------------------------------------------

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
double beta_i(double a, double b, double x);

double normal_sf(double z);
double chi_square_sf(double x, double df);
double student_t_sf(double t, double df);

// ---------------------------------------------------------------------------
// Ranks and rank correlation
// ---------------------------------------------------------------------------

/// 1-based average ranks; tied values share the mean of their positions.
template <typename Derived>
Eigen::VectorXd midranks(const Eigen::DenseBase<Derived>& x) {
  const Index n = x.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return x.derived().coeff(a) < x.derived().coeff(b); });
  Eigen::VectorXd ranks(n);
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j + 1 < n && x.derived().coeff(order[j + 1]) == x.derived().coeff(order[i])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index t = i; t <= j; ++t) ranks(order[t]) = avg;
    i = j + 1;
  }
  return ranks;
}

/// Sizes of tie groups (only groups of size > 1).
std::vector<Index> tie_groups(std::span<const double> x);

struct CorrelationTest {
  double statistic;
  std::optional<double> p_value;  // empty when not defined (e.g. n < 3 for rho)
};

/// Kendall tau-b (Knight's O(n log n) algorithm). Throws DegenerateError if
/// either input is entirely tied.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);
/// tau-b with a two-sided p-value: exact permutation distribution when there
/// are no ties and n <= 33, otherwise the tie-corrected normal approximation.
CorrelationTest kendall_tau_b_test(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of midranks. Throws DegenerateError on constant input.
double spearman_rho(std::span<const double> x, std::span<const double> y);
/// rho with the two-sided Student-t p-value on n - 2 degrees of freedom.
CorrelationTest spearman_rho_test(std::span<const double> x, std::span<const double> y);

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// ---------------------------------------------------------------------------
// Hypothesis tests
// ---------------------------------------------------------------------------

struct TestResult {
  std::string name;
  double statistic = 0.0;
  std::optional<double> df;
  double p_value = 1.0;
  std::optional<double> effect_size;  // Kendall's W for Friedman
  bool degenerate = false;
  bool exact = false;

  // Friedman: mean rank per column. Wilcoxon: empty.
  Eigen::VectorXd mean_ranks;
  // Wilcoxon: signed-rank sums and number of non-zero differences.
  double w_plus = 0.0;
  double w_minus = 0.0;
  Index n_effective = 0;
};

/// Friedman test over an n x k matrix (rows are blocks / prompts, columns are
/// treatments / models), with midranks and the standard tie correction.
TestResult friedman(const Eigen::Ref<const Eigen::MatrixXd>& L);

/// Kendall's W from a Friedman statistic over n blocks and k treatments.
inline double kendall_w(double chi_square, Index n, Index k) {
  return chi_square / (static_cast<double>(n) * static_cast<double>(k - 1));
}

/// Two-sided Wilcoxon signed-rank test. Zero differences are dropped; exact
/// for up to 20 non-zero differences, normal approximation with tie-corrected
/// variance and continuity correction above that.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

inline constexpr Index kWilcoxonExactMax = 20;

struct HolmResult {
  std::vector<bool> reject;
  Eigen::VectorXd adjusted;
};

HolmResult holm_correct(std::span<const double> p_values, double alpha = 0.05);

struct PairwiseTest {
  Index a;
  Index b;
  TestResult test;
  double adjusted_p;
  bool reject;
};

/// Wilcoxon signed-rank for all column pairs (a < b) with Holm correction.
std::vector<PairwiseTest> pairwise_wilcoxon(const Eigen::Ref<const Eigen::MatrixXd>& L,
                                            double alpha = 0.05);

struct VarianceDecomposition {
  double ss_total = 0.0;
  double ss_model = 0.0;
  double ss_prompt = 0.0;
  double ss_residual = 0.0;
  double eta2_model = 0.0;
  double eta2_prompt = 0.0;
  double eta2_residual = 0.0;
  double partial_eta2_model = 0.0;
  double partial_eta2_prompt = 0.0;
  bool degenerate = false;
};

/// Effect share relative to itself plus the residual.
inline double partial_eta_squared(double effect, double residual) {
  return effect + residual > 0.0 ? effect / (effect + residual) : 0.0;
}

/// Two-way fixed-effects (prompt x model, one observation per cell) sums of squares.
VarianceDecomposition variance_decomposition(const Eigen::Ref<const Eigen::MatrixXd>& L);

// ---------------------------------------------------------------------------
// Paired bootstrap
// ---------------------------------------------------------------------------

using SampleMetric = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

SampleMetric mean_metric();
SampleMetric cvar_metric(double alpha);

struct BootstrapOptions {
  Index replicates = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double level = 0.95;
};

struct BootstrapPair {
  Index a;
  Index b;
  double delta;  // metric(a) - metric(b)
  double lo;
  double hi;
  bool separable;  // 0 outside [lo, hi]
};

struct BootstrapResult {
  std::string statistic;
  std::vector<std::string> models;
  Eigen::VectorXd point;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  Index replicates = 0;
  std::uint64_t seed = 0;
  double level = 0.95;
  std::vector<BootstrapPair> pairs;
  /// replicates x models table of bootstrap estimates.
  Eigen::MatrixXd draws;
};

/// Prompt indices of replicate `replicate`; depends only on (seed, replicate).
std::vector<Index> bootstrap_indices(std::uint64_t seed, Index replicate, Index n);

/// Resamples prompts (rows of L) with replacement; every model in a replicate
/// sees the same index multiset. Percentile intervals use the same order
/// statistic convention as VaR.
BootstrapResult paired_bootstrap(const std::string& statistic, const SampleMetric& metric,
                                 const Eigen::Ref<const Eigen::MatrixXd>& L,
                                 const std::vector<std::string>& models,
                                 const BootstrapOptions& options = {});

}  // namespace sharp
