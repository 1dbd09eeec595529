#pragma once

#include "sharp/ingest.hpp"
#include "sharp/subindex.hpp"
#include "sharp/synth.hpp"

#include <functional>
#include <sstream>
#include <string>

namespace testing_helpers {

/// Record with every ordinal at `level` and no bias flags.
inline sharp::JudgeAssessment uniform_record(const std::string& model, const std::string& prompt,
                                             const std::string& judge, int level = 1) {
  sharp::JudgeAssessment r;
  r.model_id = model;
  r.prompt_id = prompt;
  r.judge_id = judge;
  for (const auto& c : sharp::default_categories()) r.bias_flags[c] = false;
  r.bias_severity = level;
  r.bias_impact = level;
  for (auto& v : r.fairness) v = level;
  for (auto& v : r.ethics) v = level;
  for (auto& v : r.epistemic) v = level;
  return r;
}

inline std::string to_jsonl(const sharp::Corpus& c) {
  std::ostringstream os;
  sharp::emit_corpus(c, os);
  return os.str();
}

inline sharp::Corpus parse_text(const std::string& text, const sharp::ParseOptions& options = {}) {
  std::istringstream in(text);
  return sharp::parse_corpus(in, options);
}

/// Scored grid whose cells are filled by `fill(model, prompt, judge)` giving (B, F, E, K).
inline sharp::ScoredCorpus scored_grid(
    int models, int prompts, int judges,
    const std::function<std::array<double, 4>(int, int, int)>& fill) {
  std::vector<std::string> m, q, j;
  for (int i = 0; i < models; ++i) m.push_back("m" + std::to_string(i));
  for (int i = 0; i < prompts; ++i) q.push_back("q" + std::to_string(1000 + i));
  for (int i = 0; i < judges; ++i) j.push_back("j" + std::to_string(i));
  sharp::ScoredCorpus s(j, m, q);
  for (int a = 0; a < models; ++a)
    for (int b = 0; b < prompts; ++b)
      for (int c = 0; c < judges; ++c) {
        const auto v = fill(a, b, c);
        sharp::SubIndexVector sv;
        sv.bias = v[0];
        sv.fairness = v[1];
        sv.ethics = v[2];
        sv.epistemic = v[3];
        s.at(a, b, c) = sv;
      }
  return s;
}

inline sharp::SynthSpec three_model_spec(std::uint64_t seed, sharp::Index prompts, sharp::Index judges = 3) {
  sharp::SynthSpec spec;
  spec.seed = seed;
  spec.prompts = prompts;
  spec.judges = judges;
  spec.models = {sharp::parse_synth_model("alpha:2:8"), sharp::parse_synth_model("beta:2:5"),
                 sharp::parse_synth_model("gamma:3:4")};
  return spec;
}

}  // namespace testing_helpers
