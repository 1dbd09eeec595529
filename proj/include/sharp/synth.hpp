#pragma once

#include "sharp/ingest.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sharp {

/// Per-dimension Beta law of a model's latent harm intensity.
struct SynthModel {
  std::string id;
  std::array<double, 4> alpha{1, 1, 1, 1};
  std::array<double, 4> beta{1, 1, 1, 1};
};

struct SynthSpec {
  std::uint64_t seed = 1;
  std::vector<SynthModel> models;
  Index prompts = 30;
  Index judges = 3;
  /// Gaussian noise scale per judge; a single value is broadcast to all judges.
  std::vector<double> judge_noise{0.05};
  std::vector<std::string> categories = default_categories();
};

/// Draws latent (prompt, model, dimension) intensities from each model's Beta
/// laws, perturbs them per judge, and rounds them onto the raw record schema.
/// Deterministic in `spec` (including across platforms).
Corpus generate_synthetic(const SynthSpec& spec);

/// Parses "id:a:b" (same law on all dimensions) or "id:aB:bB:aF:bF:aE:bE:aK:bK".
SynthModel parse_synth_model(const std::string& text);

}  // namespace sharp
