#include "sharp/riskcore.hpp"

namespace sharp {

std::vector<Index> tail_set(const Eigen::Ref<const Eigen::VectorXd>& samples, double alpha) {
  const double threshold = value_at_risk(samples, alpha);
  std::vector<Index> tail;
  for (Index i = 0; i < samples.size(); ++i)
    if (samples(i) >= threshold) tail.push_back(i);
  return tail;
}

RiskPoint RiskPanel::point(Index model, Index prompt) const {
  const auto& r = per_model[static_cast<std::size_t>(model)];
  return {models[model],
          prompts[prompt],
          r.radius(prompt),
          r.any_harm(prompt),
          1.0 - r.any_harm(prompt),
          r.log_risks.row(prompt).transpose(),
          r.cumulative(prompt)};
}

Eigen::MatrixXd RiskPanel::cumulative_matrix() const {
  Eigen::MatrixXd L(num_prompts(), num_models());
  for (Index m = 0; m < num_models(); ++m) L.col(m) = per_model[static_cast<std::size_t>(m)].cumulative;
  return L;
}

ModelRisk compute_model_risk(const std::string& model_id, const HarmMatrixd& z, double epsilon) {
  const Index n = z.rows();
  ModelRisk r;
  r.model_id = model_id;
  r.radius.resize(n);
  r.any_harm.resize(n);
  r.cumulative.resize(n);
  r.log_risks.resize(n, 4);
  for (Index q = 0; q < n; ++q) {
    const HarmCoordsd h = z.row(q).transpose();
    if ((h.array() < 0.0).any() || (h.array() > 1.0).any())
      throw std::invalid_argument("harm coordinates must lie in [0,1]");
    const LogRisk lr = log_risk(h, epsilon);
    r.radius(q) = harm_radius(h);
    r.any_harm(q) = any_harm(h);
    r.log_risks.row(q) = lr.per_dimension.transpose();
    r.cumulative(q) = lr.cumulative;
  }
  return r;
}

RiskPanel compute_risk(const HarmPanel& panel, double epsilon) {
  RiskPanel out;
  out.models = panel.models;
  out.prompts = panel.prompts;
  out.epsilon = epsilon;
  out.per_model.reserve(panel.models.size());
  for (Index m = 0; m < panel.num_models(); ++m)
    out.per_model.push_back(compute_model_risk(panel.models[m], panel.z[m], epsilon));
  return out;
}

HarmCoordsd tail_attribution(const ModelRisk& risk, double alpha) {
  if (risk.num_prompts() == 0) throw std::invalid_argument("tail_attribution: empty model slice");
  const auto tail = tail_set(risk.cumulative, alpha);
  HarmCoordsd tail_mean = HarmCoordsd::Zero();
  double cvar_L = 0.0;
  for (Index q : tail) {
    tail_mean += risk.log_risks.row(q).transpose();
    cvar_L += risk.cumulative(q);
  }
  tail_mean /= static_cast<double>(tail.size());
  cvar_L /= static_cast<double>(tail.size());
  if (!(cvar_L > 0.0))
    throw DegenerateError("tail_attribution: CVaR(L) <= 0, attribution shares are undefined");
  return tail_mean / cvar_L;
}

ModelRiskProfile model_profile(const ModelRisk& risk, const HarmMatrixd& z, double alpha) {
  const Index n = risk.num_prompts();
  if (n == 0) throw std::invalid_argument("model_profile: empty model slice");
  if (z.rows() != n) throw std::invalid_argument("model_profile: harm matrix / risk size mismatch");

  ModelRiskProfile p;
  p.model_id = risk.model_id;
  p.num_prompts = n;
  p.alpha = alpha;

  const auto& L = risk.cumulative;
  p.mu_L = L.mean();
  p.sigma_L = std::sqrt((L.array() - p.mu_L).square().mean());
  p.var_alpha = value_at_risk(L, alpha);
  p.cvar_alpha = cvar(L, alpha);
  p.median_L = order_statistic(L, 0.5);

  p.dimension_means = dimension_means(z);
  for (int d = 0; d < 4; ++d) p.dimension_cvars(d) = cvar(z.col(d), alpha);

  p.mean_any_harm = risk.any_harm.mean();
  p.cvar_any_harm = cvar(risk.any_harm, alpha);
  p.cvar_radius = cvar(risk.radius, alpha);
  const Eigen::VectorXd max_sub = z.rowwise().maxCoeff();
  p.cvar_max_subindex = cvar(max_sub, alpha);

  p.tail_size = static_cast<Index>(tail_set(L, alpha).size());
  if (p.cvar_alpha > 0.0) p.attribution = tail_attribution(risk, alpha);
  return p;
}

std::vector<ModelRiskProfile> profile_panel(const HarmPanel& harm, const RiskPanel& risk,
                                            double alpha) {
  std::vector<ModelRiskProfile> out;
  out.reserve(risk.per_model.size());
  for (Index m = 0; m < risk.num_models(); ++m)
    out.push_back(model_profile(risk.per_model[static_cast<std::size_t>(m)], harm.z[m], alpha));
  return out;
}

void require_simplex(const HarmCoordsd& w) {
  if ((w.array() < 0.0).any() || !w.allFinite())
    throw std::invalid_argument("policy weights must be non-negative");
  if (std::abs(w.sum() - 1.0) > 1e-9) throw std::invalid_argument("policy weights must sum to 1");
}

PolicySummary policy_summary(const HarmPanel& panel, const HarmCoordsd& weights) {
  require_simplex(weights);
  PolicySummary s;
  s.weights = weights;
  s.models = panel.models;
  s.dimension_means.resize(panel.num_models(), 4);
  for (Index m = 0; m < panel.num_models(); ++m)
    s.dimension_means.row(m) = dimension_means(panel.z[m]).transpose();
  s.scores = s.dimension_means * weights;
  return s;
}

}  // namespace sharp
