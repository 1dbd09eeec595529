#pragma once

#include "sharp/pipeline.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sharp {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view text);

struct Cell {
  std::string text;  // empty means undefined
  bool numeric = false;
};

/// A named table with a fixed column order; written as <name>.csv or <name>.json.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 6 significant digits (unit-interval values, p-values, correlations).
std::string format_unit(double x);
/// 6 decimals (log-risk values).
std::string format_log(double x);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

std::string sha256_hex(std::string_view bytes);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

struct ManifestEntry {
  std::string file;
  Index rows = 0;
  std::string sha256;
};
using Manifest = std::vector<ManifestEntry>;

inline constexpr const char* kManifestFile = "manifest.csv";

/// Writes every table plus manifest.csv (file, rows, sha256) into `out_dir`.
/// Throws std::runtime_error if the directory cannot be created or written.
Manifest write_tables(const std::vector<Table>& tables, const std::filesystem::path& out_dir,
                      OutputFormat format);

// ---------------------------------------------------------------------------
// Table builders
// ---------------------------------------------------------------------------

/// Profiles sorted by CVaR(L) ascending (ties by model id).
std::vector<ModelRiskProfile> sorted_by_cvar(std::vector<ModelRiskProfile> profiles);

Table subindex_table(const ScoredCorpus& scored);
Table harm_table(const HarmPanel& harm, const RiskPanel& risk);

std::vector<Table> profile_tables(const std::vector<ModelRiskProfile>& profiles,
                                  const PolicySummary* policy = nullptr);
std::vector<Table> stats_tables(const StatsBundle& stats);
/// Empty sections produce no tables.
std::vector<Table> robustness_tables(const RobustnessBundle& robustness);

Manifest emit_tables(const std::vector<ModelRiskProfile>& profiles, const StatsBundle* stats,
                     const RobustnessBundle* robustness, const std::filesystem::path& out_dir,
                     OutputFormat format = OutputFormat::csv);

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

inline constexpr Index kHistogramBins = 64;
inline constexpr std::array<const char*, 7> kPlotMetrics{
    "joint_safety", "any_harm", "cumulative_L", "bias", "fairness", "ethics", "epistemic"};
inline constexpr std::array<double, 5> kPlotQuantileLevels{0.025, 0.25, 0.5, 0.75, 0.975};

struct PlotRecord {
  std::string model;
  std::string metric;
  Index n = 0;
  /// min, p2.5, p25, p50, p75, p97.5, max.
  std::array<double, 7> quantiles{};
  std::vector<double> edges;  // kHistogramBins + 1
  std::vector<Index> counts;  // kHistogramBins
};

PlotRecord summarize_metric(const std::string& model, const std::string& metric,
                            const Eigen::Ref<const Eigen::VectorXd>& values);

std::vector<PlotRecord> plot_data(const HarmPanel& harm, const RiskPanel& risk);
std::vector<Table> plot_tables(const std::vector<PlotRecord>& records);

Manifest emit_plot_data(const HarmPanel& harm, const RiskPanel& risk,
                        const std::filesystem::path& out_dir,
                        OutputFormat format = OutputFormat::csv);

}  // namespace sharp
