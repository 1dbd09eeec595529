#pragma once

#include "sharp/common.hpp"
#include "sharp/subindex.hpp"

#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sharp {

/// Temperature-controlled log-sum-exp pooling:
///   tau * log( (1/K) * sum_j exp(x_j / tau) )
/// evaluated after subtracting the maximum, so small tau cannot overflow.
/// Lies between the mean (tau -> inf) and the max (tau -> 0+).
template <typename Derived>
typename Derived::Scalar lse(const Eigen::DenseBase<Derived>& values,
                             typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  if (values.size() == 0) throw std::invalid_argument("lse: empty input");
  if (!(tau > Scalar(0))) throw std::invalid_argument("lse: tau must be positive");
  const Scalar top = values.maxCoeff();
  const Scalar mean_exp = ((values.derived().array() - top) / tau).exp().mean();
  return top + tau * std::log(mean_exp);
}

inline double lse(std::span<const double> values, double tau) {
  return lse(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size())),
             tau);
}

inline double lse(std::initializer_list<double> values, double tau) {
  return lse(std::span<const double>(values.begin(), values.size()), tau);
}

/// Judge-ensembled harm embedding h = (B̄, F̄, Ē, K̄) for one (model, prompt).
struct HarmVector {
  std::string model_id;
  std::string prompt_id;
  HarmCoordsd values = HarmCoordsd::Zero();
  double tau = kDefaultTau;

  double b_bar() const { return values[0]; }
  double f_bar() const { return values[1]; }
  double e_bar() const { return values[2]; }
  double k_bar() const { return values[3]; }
};

/// All harm vectors of a corpus: one n x 4 matrix Z_M per model.
struct HarmPanel {
  std::vector<std::string> models;
  std::vector<std::string> prompts;
  double tau = kDefaultTau;
  std::vector<HarmMatrixd> z;

  Index num_models() const { return static_cast<Index>(models.size()); }
  Index num_prompts() const { return static_cast<Index>(prompts.size()); }

  HarmVector at(Index model, Index prompt) const {
    return {models[model], prompts[prompt], z[model].row(prompt).transpose(), tau};
  }
  std::vector<HarmVector> vectors() const;
};

/// Pools the available judges per (model, prompt) and dimension with lse.
/// Throws ValidationError if a pair has no judge at all.
HarmPanel ensemble_corpus(const ScoredCorpus& scored, double tau = kDefaultTau);

}  // namespace sharp
