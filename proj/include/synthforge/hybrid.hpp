#ifndef SYNTHFORGE_HYBRID_HPP
#define SYNTHFORGE_HYBRID_HPP

#include <optional>
#include <vector>

#include "synthforge/common.hpp"

namespace synthforge {

// Exactly one of alpha / lidBudgetPercent must be set. In budget mode the
// mixing weight is solved from the closed-form LID bound, which assumes a
// uniform marginal of width rangeWidth; for other data the bound is a
// heuristic and the solver warns.
struct HybridConfig {
  std::optional<double> alpha;
  std::optional<double> lidBudgetPercent;
  double eta = 0.001;
  std::optional<double> rangeWidth;  // b - a; observed range when unset

  void validate() const;
};

// Greedy without-replacement matching: originals in row order, each assigned
// its Euclidean-nearest unused synthetic row. Distance ties break toward the
// lowest synthetic row index. Returns perm with perm[i] = synthetic row for
// original i; always a permutation of 0..n-1.
std::vector<Index> nearestPairing(const Matrix& original, const Matrix& synthetic);

Matrix applyPairing(const Matrix& synthetic, const std::vector<Index>& perm);

// alpha * original + (1 - alpha) * pairedSynthetic, entrywise.
Matrix mix(const Matrix& original, const Matrix& pairedSynthetic, double alpha);

// Largest alpha whose closed-form LID bound equals the budget:
//   alpha = 1 - 2*eta / (rangeWidth * (1 - (1 - budget/100)^(1/d))).
// Clamped to [0,1); a negative unclamped value returns 0 with a warning.
double solveAlphaForBudget(double lidBudgetPercent, double eta, Index d,
                           double rangeWidth);

}  // namespace synthforge

#endif
