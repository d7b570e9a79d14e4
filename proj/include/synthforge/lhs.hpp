#ifndef SYNTHFORGE_LHS_HPP
#define SYNTHFORGE_LHS_HPP

#include <string>
#include <vector>

#include "synthforge/common.hpp"
#include "synthforge/dataset.hpp"
#include "synthforge/marginals.hpp"

namespace synthforge {

struct CovarianceTarget {
  Matrix matrix;

  // symmetric within 1e-10, Cholesky pivots >= -1e-10
  void validate() const;
};

struct Stage1Sampler {
  enum class Kind { SH, Random, RanWeibull, RanCauchy };

  Kind kind = Kind::SH;
  double weibullScale = 1.0;
  double weibullShape = 8.0;
  double cauchyLocation = 0.0;
  double cauchyScale = 1.0;

  void validate() const;
  std::string name() const;
};

Stage1Sampler::Kind parseSamplerKind(const std::string& name);

// n x d matrix whose columns are independent random permutations of the
// stratum centers {(k - 0.5)/n : k = 1..n}.
Matrix lhsUnitSample(Index n, Index d, std::uint64_t seed);

// Mean-removed covariance with divisor n.
Matrix covarianceMatrix(const Matrix& x);

// Covariance normalized to unit diagonal; zero-variance columns are treated
// as independent of everything else.
Matrix correlationMatrix(const Matrix& x);

// Rank-based correlation induction: Gaussianize the unit sample, rotate by
// the Cholesky factors of target and sample covariance so cov(R) equals the
// target exactly, then map back through the normal CDF. Returns R' in (0,1).
Matrix imanConoverInduce(const Matrix& unitSample, const CovarianceTarget& target);

// Stage-1 SH synthesis: LHS sample, correlation induction toward the
// original's correlation matrix, then per-column ICDF of the fitted
// marginals. Row count equals the original's.
Matrix synthesize(const Dataset& original, const std::vector<MarginalModel>& models,
                  std::uint64_t seed);

// i.i.d. baseline samplers of the comparison table: U(0,1),
// Weibull(scale, shape), Cauchy(location, scale).
Matrix baselineSample(const Stage1Sampler& sampler, Index n, Index d,
                      std::uint64_t seed);

}  // namespace synthforge

#endif
