#include "sharp/cli.hpp"

#include "sharp/pipeline.hpp"
#include "sharp/report.hpp"
#include "sharp/synth.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

namespace sharp {

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> categories = default_categories();
  std::string mode = "strict";
  bool pre_normalized = false;

  PipelineConfig config;
  std::vector<double> policy_weights{0.25, 0.25, 0.25, 0.25};

  // synth
  std::vector<std::string> synth_models;
  Index prompts = 30;
  Index judges = 3;
  std::vector<double> noise{0.05};
};

const std::vector<std::string> kDefaultSynthModels{"model_a:2:8", "model_b:2:5", "model_c:3:4"};

void add_options(CLI::App& app, Options& o) {
  auto& c = o.config;
  app.add_option("--input", o.input, "JSON Lines assessment file");
  app.add_option("--out", o.out, "output directory (synth: output file)");
  app.add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--tau", c.tau, "LSE temperature")->capture_default_str();
  app.add_option("--alpha", c.alpha, "tail level")->capture_default_str();
  app.add_option("--epsilon", c.epsilon, "log-risk stabilizer")->capture_default_str();
  app.add_option("--boot", c.boot, "bootstrap replicates")->capture_default_str();
  app.add_option("--seed", c.seed, "bootstrap / synth seed")->capture_default_str();
  app.add_option("--workers", c.workers, "bootstrap worker threads")->capture_default_str();
  app.add_option("--ci-level", c.ci_level, "bootstrap interval level")->capture_default_str();
  app.add_option("--holm-alpha", c.holm_alpha, "family-wise level for Holm")->capture_default_str();
  app.add_option("--categories", o.categories, "protected categories")->delimiter(',')->capture_default_str();
  app.add_option("--mode", o.mode, "grid completeness")
      ->check(CLI::IsMember({"strict", "partial"}))
      ->capture_default_str();
  app.add_flag("--pre-normalized", o.pre_normalized, "indicators already on [0,1]");
  app.add_option("--policy-weights", o.policy_weights, "simplex weights for B,F,E,K")
      ->delimiter(',')
      ->expected(4)
      ->capture_default_str();
  app.add_option("--tau-grid", c.tau_grid, "tau sweep grid")->delimiter(',')->capture_default_str();
  app.add_option("--alpha-grid", c.alpha_grid, "alpha sweep grid")->delimiter(',')->capture_default_str();
  app.add_option("--min-overlap", c.min_overlap, "minimum prompts per concordance cell")->capture_default_str();
  app.add_option("--flip-mean", c.flips.mean, "near-tie threshold on mean L")->capture_default_str();
  app.add_option("--flip-cvar", c.flips.cvar, "amplification threshold on CVaR")->capture_default_str();
  app.add_option("--model", o.synth_models, "synth model id:a:b or id:aB:bB:aF:bF:aE:bE:aK:bK");
  app.add_option("--prompts", o.prompts, "synth prompt count")->capture_default_str();
  app.add_option("--judges", o.judges, "synth judge count")->capture_default_str();
  app.add_option("--noise", o.noise, "synth judge noise (one value or one per judge)")
      ->delimiter(',')
      ->capture_default_str();
  app.set_config("--config", "", "flat key=value configuration file");
}

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require(const std::string& value, const char* flag, const std::string& sub) {
  if (value.empty()) throw UsageError(sub + " requires " + flag);
}

Corpus load(const Options& o, std::ostream& err) {
  ParseOptions p;
  p.categories = o.categories;
  p.mode = o.mode == "partial" ? CompletenessMode::partial : CompletenessMode::strict;
  p.scale = o.pre_normalized ? IndicatorScale::unit : IndicatorScale::ordinal;
  Corpus corpus = parse_corpus(o.input, p);
  for (const auto& w : corpus.warnings()) err << "warning: " << w << '\n';
  return corpus;
}

PipelineConfig config_of(const Options& o) {
  PipelineConfig c = o.config;
  for (int d = 0; d < 4; ++d) c.policy_weights[d] = o.policy_weights[static_cast<std::size_t>(d)];
  return c;
}

void report_written(std::ostream& out, const Manifest& m, const std::string& dir) {
  out << "wrote " << m.size() << " files to " << dir << '\n';
}

template <typename... Ts>
void append(std::vector<Table>& into, Ts&&... more) {
  (into.insert(into.end(), more.begin(), more.end()), ...);
}

int dispatch(const std::string& sub, const Options& o, std::ostream& out, std::ostream& err) {
  const auto format = parse_output_format(o.format);

  if (sub == "synth") {
    require(o.out, "--out", sub);
    SynthSpec spec;
    spec.seed = o.config.seed;
    spec.prompts = o.prompts;
    spec.judges = o.judges;
    spec.judge_noise = o.noise;
    spec.categories = o.categories;
    for (const auto& m : o.synth_models.empty() ? kDefaultSynthModels : o.synth_models)
      spec.models.push_back(parse_synth_model(m));
    std::ostringstream buf;
    emit_corpus(generate_synthetic(spec), buf);
    write_atomic(o.out, buf.str());
    out << "wrote " << o.out << '\n';
    return kExitOk;
  }

  require(o.input, "--input", sub);
  const Corpus corpus = load(o, err);
  if (sub == "validate") {
    out << "ok: " << corpus.records().size() << " records, " << corpus.num_models() << " models, "
        << corpus.num_prompts() << " prompts, " << corpus.num_judges() << " judges, " << corpus.missing().size()
        << " missing\n";
    return kExitOk;
  }

  require(o.out, "--out", sub);
  const PipelineConfig config = config_of(o);
  if (sub == "score") {
    const auto scored = score_corpus(corpus, config.weights);
    report_written(out, write_tables({subindex_table(scored)}, o.out, format), o.out);
    return kExitOk;
  }

  const PipelineResult result = run_pipeline(corpus, config);
  std::vector<Table> tables;
  if (sub == "profile" || sub == "report") {
    tables.push_back(harm_table(result.harm, result.risk));
    append(tables, profile_tables(result.profiles, &result.policy));
  }
  if (sub == "stats" || sub == "report") append(tables, stats_tables(run_stats(result, config)));
  if (sub == "robustness" || sub == "report") append(tables, robustness_tables(run_robustness(result, config)));
  if (sub == "report") {
    tables.push_back(subindex_table(result.scored));
    append(tables, plot_tables(plot_data(result.harm, result.risk)));
  }
  report_written(out, write_tables(tables, o.out, format), o.out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tail-risk profiling of judge-scored model assessments", "sharp"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  Options o;
  add_options(app, o);

  const std::vector<std::pair<const char*, const char*>> subcommands{
      {"validate", "parse and validate an assessment file"},
      {"score", "write per-judge sub-indices"},
      {"profile", "harm vectors, risk profiles, attribution and policy tables"},
      {"stats", "bootstrap intervals, Friedman, Wilcoxon-Holm, variance decomposition"},
      {"robustness", "parameter sweeps, judge agreement, dependence, baseline flips"},
      {"report", "every table plus plot data"},
      {"synth", "write a seeded synthetic assessment file"}};
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return dispatch(sub, o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"sharp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sharp
