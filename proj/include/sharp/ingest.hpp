#pragma once

#include "sharp/common.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sharp {

enum class Explicitness { kNone, kImplicit, kExplicit };

enum class CompletenessMode { strict, partial };

/// Scale of the fairness / ethics / epistemic indicators in the input.
/// `ordinal` expects integers 1..10; `unit` accepts pre-normalized floats in [0,1].
enum class IndicatorScale { ordinal, unit };

/// Bias categories used when none are configured.
std::vector<std::string> default_categories();

/// One judge's structured assessment of one (prompt, model) response.
struct JudgeAssessment {
  std::string prompt_id;
  std::string model_id;
  std::string judge_id;
  std::map<std::string, bool> bias_flags;
  int bias_severity = 1;
  int bias_impact = 1;
  Explicitness explicitness = Explicitness::kNone;
  bool intersectionality = false;
  std::array<double, 3> fairness{1, 1, 1};
  std::array<double, 5> ethics{1, 1, 1, 1, 1};
  std::array<double, 2> epistemic{1, 1};

  bool operator==(const JudgeAssessment&) const = default;
};

struct RecordKey {
  std::string prompt_id;
  std::string model_id;
  std::string judge_id;

  auto operator<=>(const RecordKey&) const = default;
};

/// Validated, immutable assessment store. Identifier lists are sorted
/// lexicographically; records are ordered by (model, prompt, judge).
class Corpus {
 public:
  Corpus() = default;

  const std::vector<std::string>& categories() const { return categories_; }
  IndicatorScale scale() const { return scale_; }
  CompletenessMode mode() const { return mode_; }

  const std::vector<std::string>& judges() const { return judges_; }
  const std::vector<std::string>& models() const { return models_; }
  const std::vector<std::string>& prompts() const { return prompts_; }
  const std::vector<JudgeAssessment>& records() const { return records_; }

  /// Triples absent from the grid (always empty in strict mode).
  const std::vector<RecordKey>& missing() const { return missing_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Index num_prompts() const { return static_cast<Index>(prompts_.size()); }
  Index num_models() const { return static_cast<Index>(models_.size()); }
  Index num_judges() const { return static_cast<Index>(judges_.size()); }

  /// Record at grid position, or nullptr when the triple is missing.
  const JudgeAssessment* find(Index model, Index prompt, Index judge) const;

  bool operator==(const Corpus& other) const;

  /// Builds a corpus from already-validated records. Throws ValidationError on
  /// duplicate triples or, in strict mode, on an incomplete grid.
  static Corpus from_records(std::vector<JudgeAssessment> records,
                             std::vector<std::string> categories,
                             CompletenessMode mode = CompletenessMode::strict,
                             IndicatorScale scale = IndicatorScale::ordinal,
                             std::vector<std::string> warnings = {});

 private:
  std::vector<std::string> categories_;
  IndicatorScale scale_ = IndicatorScale::ordinal;
  CompletenessMode mode_ = CompletenessMode::strict;
  std::vector<std::string> judges_;
  std::vector<std::string> models_;
  std::vector<std::string> prompts_;
  std::vector<JudgeAssessment> records_;
  std::vector<std::ptrdiff_t> cells_;  // (model * n + prompt) * K + judge -> record or -1
  std::vector<RecordKey> missing_;
  std::vector<std::string> warnings_;
};

struct ParseOptions {
  std::vector<std::string> categories = default_categories();
  CompletenessMode mode = CompletenessMode::strict;
  IndicatorScale scale = IndicatorScale::ordinal;
};

/// Parses JSON Lines assessments. Errors carry the offending line number.
Corpus parse_corpus(const std::filesystem::path& path, const ParseOptions& options = {});
Corpus parse_corpus(std::istream& in, const ParseOptions& options = {});

/// Writes the corpus back as JSON Lines with a fixed key order.
void emit_corpus(const Corpus& corpus, std::ostream& out);

double norm_ordinal(int x);
double norm_bool(bool b);
double norm_explicitness(Explicitness t);

Explicitness parse_explicitness(std::string_view label);
std::string_view explicitness_label(Explicitness t);

}  // namespace sharp
