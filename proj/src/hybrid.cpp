#include "synthforge/hybrid.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace synthforge {

void HybridConfig::validate() const {
  if (alpha.has_value() == lidBudgetPercent.has_value()) {
    throw std::invalid_argument(
        "HybridConfig: exactly one of alpha / lidBudget must be set");
  }
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) {
    throw std::invalid_argument("HybridConfig: alpha must lie in [0,1]");
  }
  if (lidBudgetPercent && !(*lidBudgetPercent > 0.0 && *lidBudgetPercent <= 100.0)) {
    throw std::invalid_argument("HybridConfig: lidBudget must lie in (0,100]%");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("HybridConfig: eta must be positive");
  if (rangeWidth && !(*rangeWidth > 0.0)) {
    throw std::invalid_argument("HybridConfig: rangeWidth must be positive");
  }
}

std::vector<Index> nearestPairing(const Matrix& original, const Matrix& synthetic) {
  if (original.rows() != synthetic.rows() || original.cols() != synthetic.cols()) {
    throw std::invalid_argument("nearestPairing: shape mismatch");
  }
  const Index n = original.rows();
  std::vector<Index> perm(n);
  std::vector<char> used(n, 0);
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index bestJ = -1;
    for (Index j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double dist = (synthetic.row(j) - original.row(i)).squaredNorm();
      if (dist < best) {
        best = dist;
        bestJ = j;
      }
    }
    perm[i] = bestJ;
    used[bestJ] = 1;
  }
  return perm;
}

Matrix applyPairing(const Matrix& synthetic, const std::vector<Index>& perm) {
  Matrix out(synthetic.rows(), synthetic.cols());
  for (Index i = 0; i < static_cast<Index>(perm.size()); ++i) {
    out.row(i) = synthetic.row(perm[i]);
  }
  return out;
}

Matrix mix(const Matrix& original, const Matrix& pairedSynthetic, double alpha) {
  if (original.rows() != pairedSynthetic.rows() ||
      original.cols() != pairedSynthetic.cols()) {
    throw std::invalid_argument("mix: shape mismatch");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("mix: alpha must lie in [0,1]");
  }
  return alpha * original + (1.0 - alpha) * pairedSynthetic;
}

double solveAlphaForBudget(double lidBudgetPercent, double eta, Index d,
                           double rangeWidth) {
  if (!(lidBudgetPercent > 0.0 && lidBudgetPercent <= 100.0)) {
    throw std::invalid_argument("solveAlphaForBudget: budget must lie in (0,100]%");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("solveAlphaForBudget: eta must be positive");
  if (d < 1) throw std::invalid_argument("solveAlphaForBudget: d must be >= 1");
  if (!(rangeWidth > 0.0)) {
    throw std::invalid_argument("solveAlphaForBudget: rangeWidth must be positive");
  }

  if (lidBudgetPercent >= 100.0) {
    // the budget never binds; stay just below the alpha = 1 endpoint
    return 1.0 - DBL_EPSILON;
  }

  const double t =
      1.0 - std::pow(1.0 - lidBudgetPercent / 100.0, 1.0 / static_cast<double>(d));
  if (!(t > 0.0)) {
    throw std::runtime_error(
        "solveAlphaForBudget: budget is too small to resolve numerically");
  }
  const double alpha = 1.0 - 2.0 * eta / (rangeWidth * t);
  if (alpha < 0.0) {
    std::cerr << "synthforge: solveAlphaForBudget: budget " << lidBudgetPercent
              << "% is unreachable even at alpha = 0; using alpha = 0\n";
    return 0.0;
  }
  return std::min(alpha, 1.0 - DBL_EPSILON);
}

}  // namespace synthforge
