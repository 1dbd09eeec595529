#include "sharp/synth.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace sharp {

namespace {

std::string padded(const char* prefix, Index i, Index count) {
  const auto width = std::to_string(count).size();
  std::string digits = std::to_string(i);
  return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

int to_ordinal(double w) { return 1 + static_cast<int>(std::lround(9.0 * clamp01(w))); }

}  // namespace

SynthModel parse_synth_model(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 9)
    throw std::invalid_argument("synthetic model spec must be id:a:b or id:aB:bB:aF:bF:aE:bE:aK:bK, got '" +
                                text + "'");
  SynthModel m;
  m.id = parts[0];
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "' in '" + text + "'");
    return v;
  };
  for (int d = 0; d < 4; ++d) {
    const std::size_t base = parts.size() == 3 ? 1 : 1 + 2 * static_cast<std::size_t>(d);
    m.alpha[static_cast<std::size_t>(d)] = number(parts[base]);
    m.beta[static_cast<std::size_t>(d)] = number(parts[base + 1]);
  }
  return m;
}

Corpus generate_synthetic(const SynthSpec& spec) {
  if (spec.models.empty()) throw std::invalid_argument("generate_synthetic: no models");
  if (spec.prompts < 1 || spec.judges < 1) throw std::invalid_argument("generate_synthetic: counts must be >= 1");
  if (spec.categories.empty()) throw std::invalid_argument("generate_synthetic: empty category set");
  if (spec.judge_noise.size() != 1 && static_cast<Index>(spec.judge_noise.size()) != spec.judges)
    throw std::invalid_argument("generate_synthetic: judge_noise must have 1 or `judges` entries");
  for (double s : spec.judge_noise)
    if (!(s >= 0.0)) throw std::invalid_argument("generate_synthetic: noise scale must be >= 0");
  for (const auto& m : spec.models)
    for (int d = 0; d < 4; ++d)
      if (!(m.alpha[static_cast<std::size_t>(d)] > 0.0) || !(m.beta[static_cast<std::size_t>(d)] > 0.0))
        throw std::invalid_argument("generate_synthetic: Beta parameters must be positive for model '" + m.id + "'");

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)};
  std::mt19937_64 engine(seq);
  boost::random::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<JudgeAssessment> records;
  records.reserve(spec.models.size() * static_cast<std::size_t>(spec.prompts * spec.judges));
  for (const auto& model : spec.models) {
    std::array<boost::random::beta_distribution<double>, 4> laws{
        boost::random::beta_distribution<double>(model.alpha[0], model.beta[0]),
        boost::random::beta_distribution<double>(model.alpha[1], model.beta[1]),
        boost::random::beta_distribution<double>(model.alpha[2], model.beta[2]),
        boost::random::beta_distribution<double>(model.alpha[3], model.beta[3])};
    for (Index q = 0; q < spec.prompts; ++q) {
      std::array<double, 4> latent{};
      for (std::size_t d = 0; d < 4; ++d) latent[d] = laws[d](engine);
      for (Index j = 0; j < spec.judges; ++j) {
        const double noise =
            spec.judge_noise.size() == 1 ? spec.judge_noise[0] : spec.judge_noise[static_cast<std::size_t>(j)];
        auto jitter = [&](double v) { return noise > 0.0 ? clamp01(v + noise * gauss(engine)) : clamp01(v); };

        std::array<double, 4> view{};
        for (std::size_t d = 0; d < 4; ++d) view[d] = jitter(latent[d]);

        JudgeAssessment r;
        r.prompt_id = padded("p", q + 1, spec.prompts);
        r.model_id = model.id;
        r.judge_id = padded("judge_", j + 1, spec.judges);
        int flagged = 0;
        for (const auto& c : spec.categories) {
          const bool hit = jitter(view[0]) > 0.5;
          r.bias_flags[c] = hit;
          flagged += hit ? 1 : 0;
        }
        r.bias_severity = to_ordinal(jitter(view[0]));
        r.bias_impact = to_ordinal(jitter(view[0]));
        r.explicitness = view[0] < 1.0 / 3.0   ? Explicitness::kNone
                         : view[0] < 2.0 / 3.0 ? Explicitness::kImplicit
                                               : Explicitness::kExplicit;
        r.intersectionality = flagged >= 2;
        for (auto& f : r.fairness) f = to_ordinal(jitter(view[1]));
        for (auto& g : r.ethics) g = to_ordinal(jitter(view[2]));
        for (auto& k : r.epistemic) k = to_ordinal(jitter(view[3]));
        records.push_back(std::move(r));
      }
    }
  }
  return Corpus::from_records(std::move(records), spec.categories);
}

}  // namespace sharp
