#include "synthforge/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "synthforge/normal.hpp"

namespace synthforge {

namespace {

constexpr double kPivotTol = 1e-10;

// Lower-triangular Cholesky tracking the smallest pivot. Returns nothing when
// a pivot falls below minPivot.
std::optional<Matrix> choleskyLower(const Matrix& c, double minPivot,
                                    double* worstPivot = nullptr) {
  const Index d = c.rows();
  Matrix l = Matrix::Zero(d, d);
  double worst = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j <= i; ++j) {
      double sum = c(i, j);
      for (Index k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        worst = std::min(worst, sum);
        if (sum < minPivot) {
          if (worstPivot) *worstPivot = worst;
          return std::nullopt;
        }
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  if (worstPivot) *worstPivot = worst;
  return l;
}

// Factor a covariance target: indefinite matrices are rejected, nearly
// singular ones get a small diagonal ridge.
Matrix factorTarget(const Matrix& c, const char* what) {
  double worstPivot = 0.0;
  if (auto l = choleskyLower(c, kPivotTol, &worstPivot)) return *l;
  if (worstPivot < -kPivotTol) {
    throw std::invalid_argument(std::string(what) +
                                ": matrix is not positive semi-definite");
  }
  const Index d = c.rows();
  const double ridge = 1e-8 * c.trace() / static_cast<double>(d);
  std::cerr << "synthforge: " << what
            << ": near-singular covariance, adding ridge " << ridge
            << " to the diagonal\n";
  Matrix ridged = c + ridge * Matrix::Identity(d, d);
  if (auto l = choleskyLower(ridged, 1e-300)) return *l;
  throw std::runtime_error(std::string(what) +
                           ": Cholesky failed even after ridge regularization");
}

}  // namespace

void CovarianceTarget::validate() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw std::invalid_argument("CovarianceTarget: matrix must be square");
  }
  if (((matrix - matrix.transpose()).cwiseAbs().maxCoeff()) > 1e-10) {
    throw std::invalid_argument("CovarianceTarget: matrix must be symmetric");
  }
  double worstPivot = 0.0;
  if (!choleskyLower(matrix, 0.0, &worstPivot) && worstPivot < -kPivotTol) {
    throw std::invalid_argument("CovarianceTarget: matrix is not positive semi-definite");
  }
}

void Stage1Sampler::validate() const {
  if (kind == Kind::RanWeibull && !(weibullScale > 0.0 && weibullShape > 0.0)) {
    throw std::invalid_argument("Stage1Sampler: Weibull scale and shape must be positive");
  }
  if (kind == Kind::RanCauchy && !(cauchyScale > 0.0)) {
    throw std::invalid_argument("Stage1Sampler: Cauchy scale must be positive");
  }
}

std::string Stage1Sampler::name() const {
  switch (kind) {
    case Kind::SH: return "sh";
    case Kind::Random: return "random";
    case Kind::RanWeibull: return "weibull";
    case Kind::RanCauchy: return "cauchy";
  }
  return "?";
}

Stage1Sampler::Kind parseSamplerKind(const std::string& name) {
  if (name == "sh") return Stage1Sampler::Kind::SH;
  if (name == "random") return Stage1Sampler::Kind::Random;
  if (name == "weibull") return Stage1Sampler::Kind::RanWeibull;
  if (name == "cauchy") return Stage1Sampler::Kind::RanCauchy;
  throw std::invalid_argument("unknown sampler '" + name +
                              "' (expected sh|random|weibull|cauchy)");
}

Matrix lhsUnitSample(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("lhsUnitSample: need n, d >= 1");
  std::vector<double> centers(n);
  for (Index k = 0; k < n; ++k) {
    centers[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
  }
  Rng rng(seed);
  Matrix v(n, d);
  std::vector<double> col = centers;
  for (Index j = 0; j < d; ++j) {
    col = centers;
    rng.shuffle(col);
    for (Index i = 0; i < n; ++i) v(i, j) = col[i];
  }
  return v;
}

Matrix covarianceMatrix(const Matrix& x) {
  const Index n = x.rows();
  Matrix centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(n);
}

Matrix correlationMatrix(const Matrix& x) {
  Matrix c = covarianceMatrix(x);
  const Index d = c.rows();
  Vector s = c.diagonal().cwiseMax(0.0).cwiseSqrt();
  Matrix corr = Matrix::Identity(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i != j && s(i) > 1e-150 && s(j) > 1e-150) {
        corr(i, j) = c(i, j) / (s(i) * s(j));
      }
    }
  }
  return corr;
}

Matrix imanConoverInduce(const Matrix& unitSample, const CovarianceTarget& target) {
  const Index n = unitSample.rows();
  const Index d = unitSample.cols();
  if (target.matrix.rows() != d) {
    throw std::invalid_argument("imanConoverInduce: target dimension mismatch");
  }
  if (n <= d) {
    throw std::invalid_argument(
        "imanConoverInduce: need n > d so the sample covariance is invertible");
  }
  const double uMin = unitSample.minCoeff();
  const double uMax = unitSample.maxCoeff();
  if (!(uMin > 0.0 && uMax < 1.0)) {
    throw std::invalid_argument("imanConoverInduce: unit sample must lie in (0,1)");
  }

  Matrix gaussian = unitSample.unaryExpr([](double u) { return normalQuantile(u); });
  Matrix sampleCov = covarianceMatrix(gaussian);

  const Matrix p = factorTarget(target.matrix, "imanConoverInduce(target)");
  double worstPivot = 0.0;
  auto q = choleskyLower(sampleCov, kPivotTol, &worstPivot);
  if (!q) {
    throw std::runtime_error(
        "imanConoverInduce: sample covariance is singular (degenerate sample)");
  }

  // R = V' (P Q^{-1})^T; solve Q^T W = P^T so that W = (P Q^{-1})^T
  Matrix w = q->transpose().triangularView<Eigen::Upper>().solve(p.transpose());
  Matrix rotated = gaussian * w;
  return rotated.unaryExpr([](double z) { return normalCdf(z); });
}

Matrix synthesize(const Dataset& original, const std::vector<MarginalModel>& models,
                  std::uint64_t seed) {
  original.validate();
  const Index n = original.rows();
  const Index d = original.cols();
  if (static_cast<Index>(models.size()) != d) {
    throw std::invalid_argument("synthesize: one MarginalModel per input column required");
  }
  if (n <= d) {
    throw std::invalid_argument("synthesize: need more rows than columns");
  }

  // copula-space target: the original's correlation structure
  CovarianceTarget target{correlationMatrix(original.inputs)};
  Matrix unit = lhsUnitSample(n, d, seed);
  Matrix quantiles = imanConoverInduce(unit, target);

  Matrix s(n, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double q = std::clamp(quantiles(i, j), 1e-9, 1.0 - 1e-9);
      s(i, j) = evalIcdf(models[j], q);
    }
  }
  return s;
}

Matrix baselineSample(const Stage1Sampler& sampler, Index n, Index d,
                      std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("baselineSample: need n, d >= 1");
  sampler.validate();
  Rng rng(seed);
  Matrix s(n, d);
  switch (sampler.kind) {
    case Stage1Sampler::Kind::SH:
      throw std::invalid_argument(
          "baselineSample: SH is not an i.i.d. baseline; use synthesize()");
    case Stage1Sampler::Kind::Random:
      for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < n; ++i) s(i, j) = rng.uniform01();
      break;
    case Stage1Sampler::Kind::RanWeibull:
      for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < n; ++i) {
          const double u = rng.uniform01();
          s(i, j) = sampler.weibullScale *
                    std::pow(-std::log1p(-u), 1.0 / sampler.weibullShape);
        }
      break;
    case Stage1Sampler::Kind::RanCauchy:
      for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < n; ++i) {
          const double u = rng.uniform01();
          s(i, j) = sampler.cauchyLocation +
                    sampler.cauchyScale * std::tan(M_PI * (u - 0.5));
        }
      break;
  }
  return s;
}

}  // namespace synthforge
