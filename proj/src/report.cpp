#include "sharp/report.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <unistd.h>

namespace sharp {

namespace fs = std::filesystem;

namespace {

std::string printf_number(const char* fmt, double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  std::string s(buf);
  // "-0" and "-0.000000" carry no information and differ across platforms' rounding paths
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

Cell text(std::string s) { return {std::move(s), false}; }
Cell unit(double x) { return {format_unit(x), true}; }
Cell logv(double x) { return {format_log(x), true}; }
Cell integer(Index i) { return {std::to_string(i), true}; }
Cell flag(bool b) { return {b ? "true" : "false", false}; }
Cell unit(const std::optional<double>& x) { return x ? unit(*x) : Cell{}; }

const std::array<const char*, 4> kDimCodes{"B", "F", "E", "K"};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string pair_code(std::pair<int, int> p) {
  return std::string(kDimCodes[static_cast<std::size_t>(p.first)]) + kDimCodes[static_cast<std::size_t>(p.second)];
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_unit(double x) { return printf_number("%.6g", x); }
std::string format_log(double x) { return printf_number("%.6f", x); }

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_escape(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_escape(row[c].text);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  std::string out = "[";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ", ";
      out += nlohmann::json(table.columns[c]).dump();
      out += ": ";
      if (row[c].text.empty())
        out += "null";
      else if (row[c].numeric)
        out += row[c].text;
      else if (row[c].text == "true" || row[c].text == "false")
        out += row[c].text;
      else
        out += nlohmann::json(row[c].text).dump();
    }
    out += '}';
  }
  out += table.rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

void write_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path.string());
  }
}

Manifest write_tables(const std::vector<Table>& tables, const fs::path& out_dir, OutputFormat format) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  Manifest manifest;
  for (const auto& t : tables) {
    const bool csv = format == OutputFormat::csv;
    const std::string file = t.name + (csv ? ".csv" : ".json");
    const std::string content = csv ? to_csv(t) : to_json(t);
    write_atomic(out_dir / file, content);
    manifest.push_back({file, static_cast<Index>(t.rows.size()), sha256_hex(content)});
  }
  std::sort(manifest.begin(), manifest.end(), [](const auto& a, const auto& b) { return a.file < b.file; });

  std::string listing = "file,rows,sha256\n";
  for (const auto& e : manifest) listing += csv_escape(e.file) + "," + std::to_string(e.rows) + "," + e.sha256 + "\n";
  write_atomic(out_dir / kManifestFile, listing);
  return manifest;
}

// ---------------------------------------------------------------------------

std::vector<ModelRiskProfile> sorted_by_cvar(std::vector<ModelRiskProfile> profiles) {
  std::stable_sort(profiles.begin(), profiles.end(), [](const auto& a, const auto& b) {
    if (a.cvar_alpha != b.cvar_alpha) return a.cvar_alpha < b.cvar_alpha;
    return a.model_id < b.model_id;
  });
  return profiles;
}

Table subindex_table(const ScoredCorpus& scored) {
  Table t{"subindices",
          {"model", "prompt", "judge", "bias", "fairness", "ethics", "epistemic", "coverage", "intensity",
           "base_bias", "amplification"},
          {}};
  for (Index m = 0; m < scored.num_models(); ++m)
    for (Index q = 0; q < scored.num_prompts(); ++q)
      for (Index j = 0; j < scored.num_judges(); ++j) {
        const auto& cell = scored.at(m, q, j);
        if (!cell) continue;
        t.rows.push_back({text(scored.models()[static_cast<std::size_t>(m)]),
                          text(scored.prompts()[static_cast<std::size_t>(q)]),
                          text(scored.judges()[static_cast<std::size_t>(j)]), unit(cell->bias),
                          unit(cell->fairness), unit(cell->ethics), unit(cell->epistemic), unit(cell->coverage),
                          unit(cell->intensity), unit(cell->base_bias), unit(cell->amplification)});
      }
  return t;
}

Table harm_table(const HarmPanel& harm, const RiskPanel& risk) {
  Table t{"harm_vectors",
          {"model", "prompt", "B", "F", "E", "K", "radius", "any_harm", "l_B", "l_F", "l_E", "l_K", "L"},
          {}};
  for (Index m = 0; m < harm.num_models(); ++m)
    for (Index q = 0; q < harm.num_prompts(); ++q) {
      const auto h = harm.at(m, q);
      const auto p = risk.point(m, q);
      std::vector<Cell> row{text(h.model_id), text(h.prompt_id)};
      for (int d = 0; d < 4; ++d) row.push_back(unit(h.values[d]));
      row.push_back(unit(p.radius));
      row.push_back(unit(p.any_harm));
      for (int d = 0; d < 4; ++d) row.push_back(logv(p.log_risks[d]));
      row.push_back(logv(p.cumulative));
      t.rows.push_back(std::move(row));
    }
  return t;
}

std::vector<Table> profile_tables(const std::vector<ModelRiskProfile>& unsorted, const PolicySummary* policy) {
  const auto profiles = sorted_by_cvar(unsorted);
  std::vector<Table> out;

  Table main{"profiles",
             {"model", "n", "alpha", "mean_L", "std_L", "var_L", "cvar_L", "median_L", "mean_B", "mean_F",
              "mean_E", "mean_K", "mean_any_harm", "cvar_any_harm", "cvar_radius", "cvar_max_subindex",
              "tail_size"},
             {}};
  Table bf{"subindex_bias_fairness", {"model", "mean_B", "cvar_B", "mean_F", "cvar_F"}, {}};
  Table ek{"subindex_ethics_epistemic", {"model", "mean_E", "cvar_E", "mean_K", "cvar_K"}, {}};
  Table shares{"tail_attribution", {"model", "cvar_L", "share_B", "share_F", "share_E", "share_K", "share_sum"}, {}};
  for (const auto& p : profiles) {
    std::vector<Cell> row{text(p.model_id), integer(p.num_prompts), unit(p.alpha), logv(p.mu_L),
                          logv(p.sigma_L), logv(p.var_alpha), logv(p.cvar_alpha), logv(p.median_L)};
    for (int d = 0; d < 4; ++d) row.push_back(unit(p.dimension_means[d]));
    row.insert(row.end(), {unit(p.mean_any_harm), unit(p.cvar_any_harm), unit(p.cvar_radius),
                           unit(p.cvar_max_subindex), integer(p.tail_size)});
    main.rows.push_back(std::move(row));

    bf.rows.push_back({text(p.model_id), unit(p.dimension_means[0]), unit(p.dimension_cvars[0]),
                       unit(p.dimension_means[1]), unit(p.dimension_cvars[1])});
    ek.rows.push_back({text(p.model_id), unit(p.dimension_means[2]), unit(p.dimension_cvars[2]),
                       unit(p.dimension_means[3]), unit(p.dimension_cvars[3])});

    std::vector<Cell> srow{text(p.model_id), logv(p.cvar_alpha)};
    for (int d = 0; d < 4; ++d) srow.push_back(p.attribution ? unit((*p.attribution)[d]) : Cell{});
    srow.push_back(p.attribution ? unit(p.attribution->sum()) : Cell{});
    shares.rows.push_back(std::move(srow));
  }
  out.push_back(std::move(main));
  out.push_back(std::move(bf));
  out.push_back(std::move(ek));
  out.push_back(std::move(shares));

  if (policy) {
    Table pol{"policy_summary", {"model", "w_B", "w_F", "w_E", "w_K", "mean_B", "mean_F", "mean_E", "mean_K", "score"},
              {}};
    for (std::size_t m = 0; m < policy->models.size(); ++m) {
      std::vector<Cell> row{text(policy->models[m])};
      for (int d = 0; d < 4; ++d) row.push_back(unit(policy->weights[d]));
      for (int d = 0; d < 4; ++d) row.push_back(unit(policy->dimension_means(static_cast<Index>(m), d)));
      row.push_back(unit(policy->scores(static_cast<Index>(m))));
      pol.rows.push_back(std::move(row));
    }
    out.push_back(std::move(pol));
  }
  return out;
}

std::vector<Table> stats_tables(const StatsBundle& stats) {
  std::vector<Table> out;

  Table ci{"bootstrap_ci", {"statistic", "model", "point", "lo", "hi", "level", "replicates", "seed"}, {}};
  Table pairs{"bootstrap_pairs", {"statistic", "model_a", "model_b", "delta", "lo", "hi", "separable"}, {}};
  for (const BootstrapResult* r : {&stats.mean_ci, &stats.cvar_ci}) {
    if (r->models.empty()) continue;
    for (std::size_t m = 0; m < r->models.size(); ++m) {
      const auto i = static_cast<Index>(m);
      ci.rows.push_back({text(r->statistic), text(r->models[m]), logv(r->point(i)), logv(r->lo(i)), logv(r->hi(i)),
                         unit(r->level), integer(r->replicates), {std::to_string(r->seed), true}});
    }
    for (const auto& p : r->pairs)
      pairs.rows.push_back({text(r->statistic), text(r->models[static_cast<std::size_t>(p.a)]),
                            text(r->models[static_cast<std::size_t>(p.b)]), logv(p.delta), logv(p.lo), logv(p.hi),
                            flag(p.separable)});
  }
  out.push_back(std::move(ci));
  out.push_back(std::move(pairs));

  const auto& models = stats.cvar_ci.models;
  if (stats.friedman) {
    const auto& f = *stats.friedman;
    const Index k = f.mean_ranks.size();
    out.push_back({"friedman",
                   {"chi_square", "df", "p_value", "kendall_w", "n_models", "degenerate"},
                   {{unit(f.statistic), f.df ? unit(*f.df) : Cell{}, unit(f.p_value), unit(f.effect_size),
                     integer(k), flag(f.degenerate)}}});
    Table ranks{"friedman_ranks", {"model", "mean_rank"}, {}};
    for (Index m = 0; m < k; ++m)
      ranks.rows.push_back({text(models[static_cast<std::size_t>(m)]), unit(f.mean_ranks(m))});
    out.push_back(std::move(ranks));
  }
  if (!stats.wilcoxon.empty()) {
    Table w{"wilcoxon_holm",
            {"model_a", "model_b", "n_effective", "w_plus", "w_minus", "statistic", "p_value", "exact", "degenerate",
             "adjusted_p", "reject"},
            {}};
    for (const auto& p : stats.wilcoxon)
      w.rows.push_back({text(models[static_cast<std::size_t>(p.a)]), text(models[static_cast<std::size_t>(p.b)]),
                        integer(p.test.n_effective), unit(p.test.w_plus), unit(p.test.w_minus),
                        unit(p.test.statistic), unit(p.test.p_value), flag(p.test.exact), flag(p.test.degenerate),
                        unit(p.adjusted_p), flag(p.reject)});
    out.push_back(std::move(w));
  }
  if (stats.variance) {
    const auto& v = *stats.variance;
    out.push_back({"variance_decomposition",
                   {"source", "sum_of_squares", "eta2", "partial_eta2"},
                   {{text("model"), logv(v.ss_model), unit(v.eta2_model), unit(v.partial_eta2_model)},
                    {text("prompt"), logv(v.ss_prompt), unit(v.eta2_prompt), unit(v.partial_eta2_prompt)},
                    {text("residual"), logv(v.ss_residual), unit(v.eta2_residual), Cell{}},
                    {text("total"), logv(v.ss_total), Cell{}, Cell{}}}});
  }
  return out;
}

namespace {

void sweep_tables(const SweepReport& s, std::vector<Table>& out) {
  Table t{"sweep_" + s.parameter, {"value", "is_reference", "model", "cvar_L", "kendall_tau", "spearman_rho"}, {}};
  for (const auto& p : s.points)
    for (std::size_t m = 0; m < s.models.size(); ++m)
      t.rows.push_back({unit(p.value), flag(p.value == s.reference), text(s.models[m]),
                        logv(p.statistic(static_cast<Index>(m))), unit(p.kendall), unit(p.spearman)});
  out.push_back(std::move(t));

  Table spread{"sweep_" + s.parameter + "_spread", {"model", "reference_cvar_L", "max_spread"}, {}};
  for (std::size_t m = 0; m < s.models.size(); ++m) {
    const auto i = static_cast<Index>(m);
    spread.rows.push_back({text(s.models[m]), logv(s.reference_statistic(i)), logv(s.max_spread(i))});
  }
  out.push_back(std::move(spread));
}

const char* flip_kind_name(FlipKind k) {
  return k == FlipKind::order_disagreement ? "order_disagreement" : "near_tie_amplification";
}

}  // namespace

std::vector<Table> robustness_tables(const RobustnessBundle& r) {
  std::vector<Table> out;
  if (r.tau_sweep) sweep_tables(*r.tau_sweep, out);
  if (r.alpha_sweep) sweep_tables(*r.alpha_sweep, out);

  if (r.agreement) {
    const auto& a = *r.agreement;
    Table mad{"mad", {"dimension", "items", "skipped", "mean_mad", "std_mad"}, {}};
    for (const auto& s : a.mad)
      mad.rows.push_back({text(std::string(dimension_name(s.dimension))), integer(s.items), integer(s.skipped), unit(s.mean),
                          unit(s.std)});
    out.push_back(std::move(mad));

    if (!a.lojo.empty()) {
      Table lojo{"lojo", {"omitted_judge", "num_models", "kendall_tau", "p_value"}, {}};
      for (const auto& e : a.lojo)
        lojo.rows.push_back({text(e.omitted_judge), integer(e.num_models), unit(e.kendall), unit(e.p_value)});
      out.push_back(std::move(lojo));
    }
    if (!a.concordance.summaries.empty()) {
      Table sum{"concordance",
                {"dimension", "judge_a", "judge_b", "num_models", "skipped", "undefined", "mean_tau", "median_tau",
                 "std_tau"},
                {}};
      for (const auto& s : a.concordance.summaries)
        sum.rows.push_back({text(std::string(dimension_name(s.dimension))), text(s.judge_a), text(s.judge_b),
                            integer(s.num_models), integer(s.skipped), integer(s.undefined), unit(s.mean),
                            unit(s.median), unit(s.std)});
      out.push_back(std::move(sum));

      Table cells{"concordance_cells", {"model", "dimension", "judge_a", "judge_b", "overlap", "tau", "skipped"}, {}};
      for (const auto& c : a.concordance.cells)
        cells.rows.push_back({text(c.model), text(std::string(dimension_name(c.dimension))), text(c.judge_a), text(c.judge_b),
                              integer(c.overlap), unit(c.tau), flag(c.skipped)});
      out.push_back(std::move(cells));
    }
  }

  if (!r.dependence.empty()) {
    std::vector<std::string> cols{"model", "num_prompts", "tail_size"};
    for (const auto& p : kDimensionPairs) cols.push_back("rho_all_" + pair_code(p));
    cols.push_back("mean_rho_all");
    for (const auto& p : kDimensionPairs) cols.push_back("rho_tail_" + pair_code(p));
    cols.push_back("mean_rho_tail");
    Table dep{"dependence", cols, {}};
    for (const auto& d : r.dependence) {
      std::vector<Cell> row{text(d.model), integer(d.num_prompts), integer(static_cast<Index>(d.tail.size()))};
      for (const auto& v : d.rho_all) row.push_back(unit(v));
      row.push_back(unit(d.mean_all));
      for (const auto& v : d.rho_tail) row.push_back(unit(v));
      row.push_back(unit(d.mean_tail));
      dep.rows.push_back(std::move(row));
    }
    out.push_back(std::move(dep));
  }

  if (r.baseline) {
    const auto& b = *r.baseline;
    Table agg{"baseline_aggregates",
              {"model", "mean_L", "cvar_L", "cvar_radius", "cvar_max_subindex", "mean_any_harm"},
              {}};
    for (const auto& row : b.rows)
      agg.rows.push_back({text(row.model), logv(row.mean_L), logv(row.cvar_L), unit(row.cvar_radius),
                          unit(row.cvar_max), unit(row.mean_any_harm)});
    out.push_back(std::move(agg));

    Table cor{"baseline_correlations", {"aggregate_a", "aggregate_b", "spearman_rho", "kendall_tau", "rho_p_value"},
              {}};
    for (const auto& c : b.correlations)
      cor.rows.push_back({text(c.aggregate_a), text(c.aggregate_b), unit(c.rho), unit(c.tau), unit(c.rho_p_value)});
    out.push_back(std::move(cor));

    Table flips{"decision_flips", {"model_a", "model_b", "delta_mean_L", "delta_cvar_L", "kind"}, {}};
    for (const auto& f : b.flips)
      flips.rows.push_back(
          {text(f.model_a), text(f.model_b), logv(f.delta_mean), logv(f.delta_cvar), text(flip_kind_name(f.kind))});
    out.push_back(std::move(flips));
  }
  return out;
}

Manifest emit_tables(const std::vector<ModelRiskProfile>& profiles, const StatsBundle* stats,
                     const RobustnessBundle* robustness, const fs::path& out_dir, OutputFormat format) {
  auto tables = profile_tables(profiles);
  if (stats) {
    auto more = stats_tables(*stats);
    tables.insert(tables.end(), more.begin(), more.end());
  }
  if (robustness) {
    auto more = robustness_tables(*robustness);
    tables.insert(tables.end(), more.begin(), more.end());
  }
  return write_tables(tables, out_dir, format);
}

// ---------------------------------------------------------------------------

PlotRecord summarize_metric(const std::string& model, const std::string& metric,
                            const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() == 0) throw std::invalid_argument("summarize_metric: empty sample");
  PlotRecord r;
  r.model = model;
  r.metric = metric;
  r.n = values.size();
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  r.quantiles[0] = lo;
  for (std::size_t i = 0; i < kPlotQuantileLevels.size(); ++i)
    r.quantiles[i + 1] = order_statistic(values, kPlotQuantileLevels[i]);
  r.quantiles[6] = hi;

  const double width = (hi - lo) / static_cast<double>(kHistogramBins);
  r.edges.resize(static_cast<std::size_t>(kHistogramBins + 1));
  for (Index b = 0; b <= kHistogramBins; ++b)
    r.edges[static_cast<std::size_t>(b)] = b == kHistogramBins ? hi : lo + width * static_cast<double>(b);
  r.counts.assign(static_cast<std::size_t>(kHistogramBins), 0);
  for (Index i = 0; i < values.size(); ++i) {
    Index bin = 0;
    if (hi > lo) {
      bin = static_cast<Index>(std::floor((values(i) - lo) / (hi - lo) * static_cast<double>(kHistogramBins)));
      bin = std::clamp<Index>(bin, 0, kHistogramBins - 1);
    }
    ++r.counts[static_cast<std::size_t>(bin)];
  }
  return r;
}

std::vector<PlotRecord> plot_data(const HarmPanel& harm, const RiskPanel& risk) {
  std::vector<PlotRecord> out;
  for (Index m = 0; m < risk.num_models(); ++m) {
    const auto& mr = risk.per_model[static_cast<std::size_t>(m)];
    const auto& model = risk.models[static_cast<std::size_t>(m)];
    const Eigen::VectorXd safety = (1.0 - mr.any_harm.array()).matrix();
    out.push_back(summarize_metric(model, kPlotMetrics[0], safety));
    out.push_back(summarize_metric(model, kPlotMetrics[1], mr.any_harm));
    out.push_back(summarize_metric(model, kPlotMetrics[2], mr.cumulative));
    for (int d = 0; d < 4; ++d)
      out.push_back(summarize_metric(model, kPlotMetrics[static_cast<std::size_t>(3 + d)], harm.z[m].col(d)));
  }
  return out;
}

std::vector<Table> plot_tables(const std::vector<PlotRecord>& records) {
  Table q{"plot_quantiles", {"model", "metric", "n", "min", "p2_5", "p25", "p50", "p75", "p97_5", "max"}, {}};
  Table h{"plot_histograms", {"model", "metric", "bin", "lo", "hi", "count"}, {}};
  for (const auto& r : records) {
    const bool log_scale = r.metric == "cumulative_L";
    auto num = [&](double x) { return log_scale ? logv(x) : unit(x); };
    std::vector<Cell> row{text(r.model), text(r.metric), integer(r.n)};
    for (double v : r.quantiles) row.push_back(num(v));
    q.rows.push_back(std::move(row));
    for (std::size_t b = 0; b < r.counts.size(); ++b)
      h.rows.push_back({text(r.model), text(r.metric), integer(static_cast<Index>(b)), num(r.edges[b]),
                        num(r.edges[b + 1]), integer(r.counts[b])});
  }
  return {std::move(q), std::move(h)};
}

Manifest emit_plot_data(const HarmPanel& harm, const RiskPanel& risk, const fs::path& out_dir, OutputFormat format) {
  return write_tables(plot_tables(plot_data(harm, risk)), out_dir, format);
}

}  // namespace sharp
