#include "sharp/pipeline.hpp"

namespace sharp {

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config) {
  require_simplex(config.policy_weights);
  ScoredCorpus scored = score_corpus(corpus, config.weights);
  HarmPanel harm = ensemble_corpus(scored, config.tau);
  RiskPanel risk = compute_risk(harm, config.epsilon);
  auto profiles = profile_panel(harm, risk, config.alpha);
  auto policy = policy_summary(harm, config.policy_weights);
  return {std::move(scored), std::move(harm), std::move(risk), std::move(profiles), std::move(policy)};
}

StatsBundle run_stats(const PipelineResult& result, const PipelineConfig& config) {
  const Eigen::MatrixXd L = result.risk.cumulative_matrix();
  BootstrapOptions options;
  options.replicates = config.boot;
  options.seed = config.seed;
  options.workers = config.workers;
  options.level = config.ci_level;

  StatsBundle out;
  out.mean_ci = paired_bootstrap("mean_L", mean_metric(), L, result.risk.models, options);
  out.cvar_ci = paired_bootstrap("cvar_L", cvar_metric(config.alpha), L, result.risk.models, options);
  if (L.cols() >= 2 && L.rows() >= 2) {
    out.friedman = friedman(L);
    out.wilcoxon = pairwise_wilcoxon(L, config.holm_alpha);
    out.variance = variance_decomposition(L);
  }
  return out;
}

RobustnessBundle run_robustness(const PipelineResult& result, const PipelineConfig& config) {
  RobustnessBundle out;
  if (!config.tau_grid.empty())
    out.tau_sweep = tau_sweep(result.scored, config.tau_grid, config.tau, config.alpha, config.epsilon);
  if (!config.alpha_grid.empty()) out.alpha_sweep = alpha_sweep(result.risk, config.alpha_grid, config.alpha);

  AgreementReport agreement;
  agreement.mad = mad_dispersion(result.scored);
  if (result.scored.num_judges() >= 2)
    agreement.lojo = leave_one_judge_out(result.scored, config.tau, config.alpha, config.epsilon);
  agreement.concordance = judge_concordance(result.scored, config.min_overlap);
  out.agreement = std::move(agreement);

  out.dependence = independence_test(result.harm, result.risk, config.alpha);
  out.baseline = baseline_aggregates(result.profiles, config.flips);
  return out;
}

}  // namespace sharp
