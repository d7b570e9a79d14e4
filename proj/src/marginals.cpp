#include "synthforge/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "synthforge/quadrature.hpp"

namespace synthforge {

namespace {

constexpr int kGridSize = 512;
constexpr int kCellNodes = 16;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kDensityFloor = 1e-300;

double rawMixture(double x, const Vector& centers, double bandwidth) {
  return (((centers.array() - x) / bandwidth).square() * -0.5).exp().mean();
}

void checkColumn(const ColumnSample& column) {
  if (column.values.size() < 1) {
    throw std::invalid_argument("marginals: column " +
                                std::to_string(column.columnIndex) + " is empty");
  }
  if (!column.values.allFinite()) {
    throw std::invalid_argument("marginals: column " +
                                std::to_string(column.columnIndex) +
                                " contains a non-finite value");
  }
}

}  // namespace

double MarginalModel::densityAt(double x) const {
  return normalizer * rawMixture(x, centers, bandwidth);
}

double MarginalModel::gridResolution() const {
  double res = 0.0;
  for (Index i = 1; i < cdf.size(); ++i) res = std::max(res, cdf(i) - cdf(i - 1));
  return res;
}

MarginalModel fitKde(const ColumnSample& column, double bandwidth) {
  checkColumn(column);
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("fitKde: bandwidth must be positive");
  }

  MarginalModel model;
  model.bandwidth = bandwidth;
  model.centers = column.values;

  const double lo = column.values.minCoeff() - 3.0 * bandwidth;
  const double hi = column.values.maxCoeff() + 3.0 * bandwidth;
  model.gridPoints = Vector::LinSpaced(kGridSize, lo, hi);

  // cumulative Gauss-Legendre quadrature of the raw mixture, cell by cell
  const GaussLegendreRule& rule = GaussLegendreRule::get(kCellNodes);
  Vector cdf(kGridSize);
  cdf(0) = 0.0;
  for (Index cell = 0; cell + 1 < kGridSize; ++cell) {
    const double a = model.gridPoints(cell);
    const double b = model.gridPoints(cell + 1);
    const double mid = 0.5 * (a + b);
    const double halfWidth = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < kCellNodes; ++k) {
      sum += rule.weights[k] *
             rawMixture(mid + halfWidth * rule.nodes[k], column.values, bandwidth);
    }
    cdf(cell + 1) = cdf(cell) + sum * halfWidth;
  }

  const double totalMass = cdf(kGridSize - 1);
  if (!(totalMass > 0.0)) {
    throw std::runtime_error("fitKde: integrated mass vanished");
  }
  model.normalizer = 1.0 / totalMass;
  model.cdf = cdf * model.normalizer;
  model.cdf(0) = 0.0;
  model.cdf(kGridSize - 1) = 1.0;

  model.density.resize(kGridSize);
  for (Index i = 0; i < kGridSize; ++i) {
    model.density(i) =
        model.normalizer * rawMixture(model.gridPoints(i), column.values, bandwidth);
  }
  return model;
}

std::vector<double> defaultBandwidthGrid() {
  std::vector<double> grid;
  grid.reserve(40);
  for (int k = 1; k <= 40; ++k) grid.push_back(0.05 * k);
  return grid;
}

double selectBandwidth(const ColumnSample& column, const std::vector<double>& grid,
                       int folds) {
  checkColumn(column);
  if (grid.empty()) throw std::invalid_argument("selectBandwidth: grid is empty");
  for (double bw : grid) {
    if (!(bw > 0.0)) {
      throw std::invalid_argument("selectBandwidth: grid values must be positive");
    }
  }
  const Index n = column.values.size();
  if (folds < 2 || static_cast<Index>(folds) > n) {
    throw std::invalid_argument(
        "selectBandwidth: need 2 <= folds <= sample size (fewer samples than folds)");
  }

  // round-robin partition: sample i belongs to fold i % folds
  std::vector<Vector> trainParts(folds), testParts(folds);
  for (int f = 0; f < folds; ++f) {
    Index nTest = 0;
    for (Index i = 0; i < n; ++i) nTest += (i % folds == f);
    trainParts[f].resize(n - nTest);
    testParts[f].resize(nTest);
    Index a = 0, b = 0;
    for (Index i = 0; i < n; ++i) {
      if (i % folds == f) {
        testParts[f](b++) = column.values(i);
      } else {
        trainParts[f](a++) = column.values(i);
      }
    }
  }

  double bestBw = grid.front();
  double bestLl = -std::numeric_limits<double>::infinity();
  for (double bw : grid) {
    double ll = 0.0;
    const double logConst = std::log(bw * kSqrt2Pi);
    for (int f = 0; f < folds; ++f) {
      const Vector& train = trainParts[f];
      const Vector& test = testParts[f];
      double foldLl = 0.0;
      for (Index i = 0; i < test.size(); ++i) {
        const double dens = rawMixture(test(i), train, bw);
        foldLl += std::log(std::max(dens, kDensityFloor)) - logConst;
      }
      ll += foldLl / static_cast<double>(test.size());
    }
    ll /= folds;
    if (ll > bestLl || (ll == bestLl && bw < bestBw)) {
      bestLl = ll;
      bestBw = bw;
    }
  }
  return bestBw;
}

double evalCdf(const MarginalModel& model, double x) {
  const Index m = model.gridPoints.size();
  const double lo = model.gridPoints(0);
  const double hi = model.gridPoints(m - 1);
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  const double step = (hi - lo) / static_cast<double>(m - 1);
  Index cell = static_cast<Index>((x - lo) / step);
  cell = std::clamp<Index>(cell, 0, m - 2);
  const double x0 = model.gridPoints(cell);
  const double x1 = model.gridPoints(cell + 1);
  const double t = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
  const double v = model.cdf(cell) + t * (model.cdf(cell + 1) - model.cdf(cell));
  return std::clamp(v, 0.0, 1.0);
}

double evalIcdf(const MarginalModel& model, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("evalIcdf: q must lie in [0,1]");
  }
  const Index m = model.cdf.size();
  if (q <= 0.0) return model.gridPoints(0);
  if (q >= 1.0) return model.gridPoints(m - 1);

  // first grid index with cdf >= q
  const double* begin = model.cdf.data();
  const double* it = std::lower_bound(begin, begin + m, q);
  Index idx = it - begin;
  if (idx <= 0) return model.gridPoints(0);
  if (idx >= m) return model.gridPoints(m - 1);
  const double c0 = model.cdf(idx - 1);
  const double c1 = model.cdf(idx);
  const double t = c1 > c0 ? (q - c0) / (c1 - c0) : 1.0;
  return model.gridPoints(idx - 1) +
         t * (model.gridPoints(idx) - model.gridPoints(idx - 1));
}

}  // namespace synthforge
