#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sharp {

using Index = Eigen::Index;

/// Harm dimensions in embedding order (B, F, E, K).
enum class Dimension : int { bias = 0, fairness = 1, ethics = 2, epistemic = 3 };

inline constexpr std::array<Dimension, 4> kDimensions{
    Dimension::bias, Dimension::fairness, Dimension::ethics, Dimension::epistemic};

inline constexpr std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::bias: return "bias";
    case Dimension::fairness: return "fairness";
    case Dimension::ethics: return "ethics";
    case Dimension::epistemic: return "epistemic";
  }
  return "?";
}

template <typename Scalar>
using HarmCoords = Eigen::Matrix<Scalar, 4, 1>;

/// Rows are prompts, columns are the four harm dimensions.
template <typename Scalar>
using HarmMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 4>;

using HarmCoordsd = HarmCoords<double>;
using HarmMatrixd = HarmMatrix<double>;

inline constexpr double kDefaultTau = 0.20;
inline constexpr double kDefaultAlpha = 0.95;
inline constexpr double kDefaultEpsilon = 1e-6;

/// Raised for malformed or inconsistent input data (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A statistic is mathematically undefined on the given data.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sharp
