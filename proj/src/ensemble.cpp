#include "sharp/ensemble.hpp"

namespace sharp {

std::vector<HarmVector> HarmPanel::vectors() const {
  std::vector<HarmVector> out;
  out.reserve(static_cast<std::size_t>(num_models() * num_prompts()));
  for (Index m = 0; m < num_models(); ++m)
    for (Index q = 0; q < num_prompts(); ++q) out.push_back(at(m, q));
  return out;
}

HarmPanel ensemble_corpus(const ScoredCorpus& scored, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("ensemble_corpus: tau must be positive");

  HarmPanel panel;
  panel.models = scored.models();
  panel.prompts = scored.prompts();
  panel.tau = tau;
  panel.z.reserve(scored.models().size());

  const Index K = scored.num_judges();
  Eigen::Matrix<double, Eigen::Dynamic, 4> judges(K, 4);
  for (Index m = 0; m < scored.num_models(); ++m) {
    HarmMatrixd z(scored.num_prompts(), 4);
    for (Index q = 0; q < scored.num_prompts(); ++q) {
      Index present = 0;
      for (Index j = 0; j < K; ++j)
        if (const auto& s = scored.at(m, q, j)) judges.row(present++) = s->coords().transpose();
      if (present == 0)
        throw ValidationError("no judge assessments for (prompt=" + scored.prompts()[q] +
                              ", model=" + scored.models()[m] + ")");
      for (int d = 0; d < 4; ++d) z(q, d) = lse(judges.col(d).head(present), tau);
    }
    panel.z.push_back(std::move(z));
  }
  return panel;
}

}  // namespace sharp
