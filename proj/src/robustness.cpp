#include "sharp/robustness.hpp"

#include <algorithm>
#include <cmath>

namespace sharp {

namespace {

Eigen::VectorXd cvar_by_model(const RiskPanel& risk, double alpha) {
  Eigen::VectorXd out(risk.num_models());
  for (Index m = 0; m < risk.num_models(); ++m)
    out(m) = cvar(risk.per_model[static_cast<std::size_t>(m)].cumulative, alpha);
  return out;
}

Eigen::VectorXd pipeline_cvar(const ScoredCorpus& scored, double tau, double alpha, double epsilon) {
  return cvar_by_model(compute_risk(ensemble_corpus(scored, tau), epsilon), alpha);
}

void finish_sweep(SweepReport& report) {
  const Index k = static_cast<Index>(report.models.size());
  report.max_spread = Eigen::VectorXd::Zero(k);
  if (report.points.empty()) return;
  for (Index m = 0; m < k; ++m) {
    double lo = report.points.front().statistic(m), hi = lo;
    for (const auto& p : report.points) {
      lo = std::min(lo, p.statistic(m));
      hi = std::max(hi, p.statistic(m));
    }
    report.max_spread(m) = hi - lo;
  }
  for (auto& p : report.points) {
    auto [kt, rho] = ordering_agreement(p.statistic, report.reference_statistic);
    p.kendall = kt;
    p.spearman = rho;
  }
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Index>(v.size()));
  const double mean = x.mean();
  return std::sqrt((x.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename F>
std::optional<double> defined(F&& f) {
  try {
    return f();
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
}

}  // namespace

std::pair<std::optional<double>, std::optional<double>> ordering_agreement(const Eigen::VectorXd& a,
                                                                           const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ordering_agreement: size mismatch");
  if (a.size() < 2) return {1.0, 1.0};
  return {defined([&] { return kendall_tau_b(as_span(a), as_span(b)); }),
          defined([&] { return spearman_rho(as_span(a), as_span(b)); })};
}

SweepReport tau_sweep(const ScoredCorpus& scored, std::span<const double> grid, double reference,
                      double alpha, double epsilon) {
  for (double t : grid)
    if (!(t > 0.0)) throw std::invalid_argument("tau_sweep: grid values must be positive");
  if (!(reference > 0.0)) throw std::invalid_argument("tau_sweep: reference tau must be positive");

  SweepReport report;
  report.parameter = "tau";
  report.reference = reference;
  report.models = scored.models();
  report.reference_statistic = pipeline_cvar(scored, reference, alpha, epsilon);
  for (double t : grid) report.points.push_back({t, pipeline_cvar(scored, t, alpha, epsilon), {}, {}});
  finish_sweep(report);
  return report;
}

SweepReport alpha_sweep(const RiskPanel& risk, std::span<const double> grid, double reference) {
  for (double a : grid)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha_sweep: grid values must lie in (0,1)");
  SweepReport report;
  report.parameter = "alpha";
  report.reference = reference;
  report.models = risk.models;
  report.reference_statistic = cvar_by_model(risk, reference);
  for (double a : grid) report.points.push_back({a, cvar_by_model(risk, a), {}, {}});
  finish_sweep(report);
  return report;
}

std::vector<LojoEntry> leave_one_judge_out(const ScoredCorpus& scored, double tau, double alpha,
                                           double epsilon) {
  if (scored.num_judges() < 2) throw std::invalid_argument("leave_one_judge_out: need at least two judges");
  const Eigen::VectorXd full = pipeline_cvar(scored, tau, alpha, epsilon);
  std::vector<LojoEntry> out;
  for (Index j = 0; j < scored.num_judges(); ++j) {
    const Eigen::VectorXd reduced = pipeline_cvar(scored.without_judge(j), tau, alpha, epsilon);
    LojoEntry e{scored.judges()[j], scored.num_models(), std::nullopt, std::nullopt};
    if (full.size() >= 2) {
      try {
        auto t = kendall_tau_b_test(as_span(full), as_span(reduced));
        e.kendall = t.statistic;
        e.p_value = t.p_value;
      } catch (const DegenerateError&) {
      }
    }
    out.push_back(e);
  }
  return out;
}

double mean_absolute_deviation(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("mean_absolute_deviation: empty input");
  const Eigen::Map<const Eigen::VectorXd> x(scores.data(), static_cast<Index>(scores.size()));
  return (x.array() - x.mean()).abs().mean();
}

std::array<MadSummary, 4> mad_dispersion(const ScoredCorpus& scored) {
  std::array<MadSummary, 4> out{};
  std::array<std::vector<double>, 4> values;
  std::vector<double> judges;
  for (int d = 0; d < 4; ++d) {
    out[static_cast<std::size_t>(d)].dimension = kDimensions[static_cast<std::size_t>(d)];
    for (Index m = 0; m < scored.num_models(); ++m)
      for (Index q = 0; q < scored.num_prompts(); ++q) {
        judges.clear();
        for (Index j = 0; j < scored.num_judges(); ++j)
          if (const auto& s = scored.at(m, q, j)) judges.push_back(s->coords()(d));
        if (judges.size() < 2) {
          ++out[static_cast<std::size_t>(d)].skipped;
          continue;
        }
        values[static_cast<std::size_t>(d)].push_back(mean_absolute_deviation(judges));
      }
  }
  for (std::size_t d = 0; d < 4; ++d) {
    const auto& v = values[d];
    out[d].items = static_cast<Index>(v.size());
    if (v.empty()) continue;
    out[d].mean = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size())).mean();
    out[d].std = sample_std(v);
  }
  return out;
}

ConcordanceReport judge_concordance(const ScoredCorpus& scored, Index min_overlap) {
  if (scored.num_judges() < 2) throw std::invalid_argument("judge_concordance: need at least two judges");
  ConcordanceReport report;
  report.min_overlap = min_overlap;

  std::vector<double> xa, xb;
  for (int d = 0; d < 4; ++d)
    for (Index a = 0; a < scored.num_judges(); ++a)
      for (Index b = a + 1; b < scored.num_judges(); ++b) {
        ConcordanceSummary summary;
        summary.dimension = kDimensions[static_cast<std::size_t>(d)];
        summary.judge_a = scored.judges()[a];
        summary.judge_b = scored.judges()[b];
        std::vector<double> taus;
        for (Index m = 0; m < scored.num_models(); ++m) {
          xa.clear();
          xb.clear();
          for (Index q = 0; q < scored.num_prompts(); ++q) {
            const auto& sa = scored.at(m, q, a);
            const auto& sb = scored.at(m, q, b);
            if (sa && sb) {
              xa.push_back(sa->coords()(d));
              xb.push_back(sb->coords()(d));
            }
          }
          ConcordanceCell cell{scored.models()[m], summary.dimension, summary.judge_a, summary.judge_b,
                               static_cast<Index>(xa.size()), std::nullopt, false};
          if (cell.overlap < std::max<Index>(min_overlap, 2)) {
            cell.skipped = true;
            ++summary.skipped;
          } else {
            cell.tau = defined([&] { return kendall_tau_b(xa, xb); });
            if (cell.tau)
              taus.push_back(*cell.tau);
            else
              ++summary.undefined;
          }
          report.cells.push_back(cell);
        }
        summary.num_models = static_cast<Index>(taus.size());
        if (!taus.empty()) {
          summary.mean = Eigen::Map<const Eigen::VectorXd>(taus.data(), static_cast<Index>(taus.size())).mean();
          summary.median = median(taus);
          summary.std = sample_std(taus);
        }
        report.summaries.push_back(summary);
      }
  return report;
}

DependenceRow independence_test(const std::string& model, const HarmMatrixd& z, const ModelRisk& risk,
                                double alpha) {
  if (z.rows() != risk.num_prompts())
    throw std::invalid_argument("independence_test: harm matrix / risk size mismatch");
  DependenceRow row;
  row.model = model;
  row.num_prompts = z.rows();
  row.tail = tail_set(risk.cumulative, alpha);

  HarmMatrixd tail_z(static_cast<Index>(row.tail.size()), 4);
  for (std::size_t i = 0; i < row.tail.size(); ++i) tail_z.row(static_cast<Index>(i)) = z.row(row.tail[i]);

  auto correlate = [](const HarmMatrixd& m, std::array<std::optional<double>, 6>& rho,
                      std::optional<double>& mean, Index& count) {
    double sum = 0.0;
    count = 0;
    for (std::size_t p = 0; p < kDimensionPairs.size(); ++p) {
      if (m.rows() < 3) continue;
      const Eigen::VectorXd u = m.col(kDimensionPairs[p].first);
      const Eigen::VectorXd v = m.col(kDimensionPairs[p].second);
      rho[p] = defined([&] { return spearman_rho(as_span(u), as_span(v)); });
      if (rho[p]) {
        sum += *rho[p];
        ++count;
      }
    }
    if (count > 0) mean = sum / static_cast<double>(count);
  };
  correlate(z, row.rho_all, row.mean_all, row.defined_all);
  correlate(tail_z, row.rho_tail, row.mean_tail, row.defined_tail);
  return row;
}

std::vector<DependenceRow> independence_test(const HarmPanel& harm, const RiskPanel& risk, double alpha) {
  std::vector<DependenceRow> out;
  for (Index m = 0; m < risk.num_models(); ++m)
    out.push_back(independence_test(risk.models[m], harm.z[m], risk.per_model[static_cast<std::size_t>(m)], alpha));
  return out;
}

std::vector<DecisionFlip> decision_flips(const std::vector<BaselineRow>& rows, const FlipThresholds& thresholds) {
  std::vector<DecisionFlip> flips;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const double dm = rows[a].mean_L - rows[b].mean_L;
      const double dc = rows[a].cvar_L - rows[b].cvar_L;
      if (dm * dc < 0.0)
        flips.push_back({rows[a].model, rows[b].model, dm, dc, FlipKind::order_disagreement});
      if (std::abs(dm) < thresholds.mean && std::abs(dc) > thresholds.cvar)
        flips.push_back({rows[a].model, rows[b].model, dm, dc, FlipKind::near_tie_amplification});
    }
  return flips;
}

BaselineReport baseline_aggregates(const std::vector<ModelRiskProfile>& profiles,
                                   const FlipThresholds& thresholds) {
  BaselineReport report;
  report.thresholds = thresholds;
  const Index k = static_cast<Index>(profiles.size());
  std::array<Eigen::VectorXd, 4> aggregates;
  for (auto& a : aggregates) a.resize(k);
  for (Index m = 0; m < k; ++m) {
    const auto& p = profiles[static_cast<std::size_t>(m)];
    report.rows.push_back({p.model_id, p.mu_L, p.cvar_alpha, p.cvar_radius, p.cvar_max_subindex, p.mean_any_harm});
    aggregates[0](m) = p.cvar_alpha;
    aggregates[1](m) = p.cvar_radius;
    aggregates[2](m) = p.cvar_max_subindex;
    aggregates[3](m) = p.mean_any_harm;
  }
  static const std::array<const char*, 4> names{"cvar_L", "cvar_radius", "cvar_max_subindex", "mean_any_harm"};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) {
      AggregateCorrelation c{names[a], names[b], std::nullopt, std::nullopt, std::nullopt};
      if (k >= 2) {
        try {
          auto rho = spearman_rho_test(as_span(aggregates[a]), as_span(aggregates[b]));
          c.rho = rho.statistic;
          c.rho_p_value = rho.p_value;
        } catch (const DegenerateError&) {
        }
        c.tau = defined([&] { return kendall_tau_b(as_span(aggregates[a]), as_span(aggregates[b])); });
      }
      report.correlations.push_back(c);
    }
  report.flips = decision_flips(report.rows, thresholds);
  return report;
}

}  // namespace sharp
