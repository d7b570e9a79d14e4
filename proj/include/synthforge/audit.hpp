#ifndef SYNTHFORGE_AUDIT_HPP
#define SYNTHFORGE_AUDIT_HPP

#include <optional>
#include <vector>

#include "synthforge/common.hpp"

namespace synthforge {

struct PrivacyReport {
  double lidPercent = 0.0;
  double eta = 0.0;
  std::vector<Index> perDimensionBreachCounts;
  // present only when the uniform-assumption bound applies
  std::optional<double> theoreticalBoundPercent;
};

// value is |a - b| / |a|, unless |a| < 1e-12 in which case the absolute
// difference is reported and isRelative flags it.
struct RelativeDelta {
  double value = 0.0;
  bool isRelative = true;
};

struct FidelityReport {
  std::vector<double> tvPerColumn;
  double tvAverage = 0.0;
  std::vector<RelativeDelta> meanDeltas;
  std::vector<RelativeDelta> varianceDeltas;
  std::vector<std::vector<RelativeDelta>> covarianceDeltas;  // d x d
  int binCount = 50;
};

// Row-aligned location disclosure: record i is breached iff some dimension j
// has |x_ij - x*_ij| <= eta. Percent of breached records plus per-dimension
// breach counts.
PrivacyReport computeLid(const Matrix& original, const Matrix& synthetic, double eta);

// (1 - (1 - 2*eta/((b-a)(1-alpha)))^d) * 100, valid while the inner term is
// below one.
double lidBound(double alpha, double eta, Index d, double rangeWidth);

// Half L1 distance between two probability vectors.
double tvNorm(const std::vector<double>& p, const std::vector<double>& q);

// TV between the two samples binned over shared equal-width bins spanning the
// union of their ranges.
double histogramTv(const Vector& originalColumn, const Vector& syntheticColumn,
                   int binCount);

// Per-column mean/variance and pairwise covariance deltas; fills the delta
// fields of the report. Row counts may differ.
void momentDeltas(const Matrix& original, const Matrix& synthetic,
                  FidelityReport& report);

FidelityReport buildFidelityReport(const Matrix& original, const Matrix& synthetic,
                                   int binCount = 50);

}  // namespace synthforge

#endif
