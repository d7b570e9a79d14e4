#include "synthforge/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace synthforge {

PrivacyReport computeLid(const Matrix& original, const Matrix& synthetic, double eta) {
  if (original.rows() != synthetic.rows() || original.cols() != synthetic.cols()) {
    throw std::invalid_argument("computeLid: shape mismatch");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("computeLid: eta must be positive");

  const Index n = original.rows();
  const Index d = original.cols();
  PrivacyReport report;
  report.eta = eta;
  report.perDimensionBreachCounts.assign(d, 0);
  std::vector<char> breached(n, 0);
  for (Index j = 0; j < d; ++j) {
    Index count = 0;
    for (Index i = 0; i < n; ++i) {
      if (std::abs(original(i, j) - synthetic(i, j)) <= eta) {
        ++count;
        breached[i] = 1;
      }
    }
    report.perDimensionBreachCounts[j] = count;
  }
  const Index total = std::count(breached.begin(), breached.end(), char{1});
  report.lidPercent = 100.0 * static_cast<double>(total) / static_cast<double>(n);
  return report;
}

double lidBound(double alpha, double eta, Index d, double rangeWidth) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("lidBound: alpha must lie in [0,1)");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("lidBound: eta must be positive");
  if (d < 1) throw std::invalid_argument("lidBound: d must be >= 1");
  if (!(rangeWidth > 0.0)) {
    throw std::invalid_argument("lidBound: rangeWidth must be positive");
  }
  const double inner = 2.0 * eta / (rangeWidth * (1.0 - alpha));
  if (!(inner < 1.0)) throw std::runtime_error("lidBound: bound formula domain exceeded");
  return (1.0 - std::pow(1.0 - inner, static_cast<double>(d))) * 100.0;
}

double tvNorm(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tvNorm: length mismatch");
  double sumP = 0.0, sumQ = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw std::invalid_argument("tvNorm: entries must be non-negative");
    }
    sumP += p[i];
    sumQ += q[i];
  }
  if (std::abs(sumP - 1.0) > 1e-9 || std::abs(sumQ - 1.0) > 1e-9) {
    throw std::invalid_argument("tvNorm: inputs must each sum to 1");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

double histogramTv(const Vector& originalColumn, const Vector& syntheticColumn,
                   int binCount) {
  if (binCount < 2) throw std::invalid_argument("histogramTv: binCount must be >= 2");
  if (originalColumn.size() == 0 || syntheticColumn.size() == 0) {
    throw std::invalid_argument("histogramTv: empty column");
  }
  const double lo = std::min(originalColumn.minCoeff(), syntheticColumn.minCoeff());
  const double hi = std::max(originalColumn.maxCoeff(), syntheticColumn.maxCoeff());
  if (!(hi > lo)) return 0.0;  // both samples concentrated at one value

  auto binned = [&](const Vector& column) {
    std::vector<double> mass(binCount, 0.0);
    const double scale = binCount / (hi - lo);
    for (Index i = 0; i < column.size(); ++i) {
      int b = static_cast<int>((column(i) - lo) * scale);
      b = std::clamp(b, 0, binCount - 1);
      mass[b] += 1.0 / static_cast<double>(column.size());
    }
    return mass;
  };
  double tv = 0.0;
  const auto p = binned(originalColumn);
  const auto q = binned(syntheticColumn);
  for (int b = 0; b < binCount; ++b) tv += std::abs(p[b] - q[b]);
  return 0.5 * tv;
}

namespace {

RelativeDelta makeDelta(double reference, double value) {
  RelativeDelta delta;
  if (std::abs(reference) < 1e-12) {
    delta.value = std::abs(reference - value);
    delta.isRelative = false;
  } else {
    delta.value = std::abs(reference - value) / std::abs(reference);
    delta.isRelative = true;
  }
  return delta;
}

}  // namespace

void momentDeltas(const Matrix& original, const Matrix& synthetic,
                  FidelityReport& report) {
  if (original.cols() != synthetic.cols()) {
    throw std::invalid_argument("momentDeltas: column count mismatch");
  }
  const Index d = original.cols();
  auto cov = [](const Matrix& x) {
    Matrix centered = x.rowwise() - x.colwise().mean();
    return Matrix(centered.transpose() * centered / static_cast<double>(x.rows()));
  };
  const Vector meanO = original.colwise().mean();
  const Vector meanS = synthetic.colwise().mean();
  const Matrix covO = cov(original);
  const Matrix covS = cov(synthetic);

  report.meanDeltas.resize(d);
  report.varianceDeltas.resize(d);
  report.covarianceDeltas.assign(d, std::vector<RelativeDelta>(d));
  for (Index j = 0; j < d; ++j) {
    report.meanDeltas[j] = makeDelta(meanO(j), meanS(j));
    report.varianceDeltas[j] = makeDelta(covO(j, j), covS(j, j));
    for (Index k = 0; k < d; ++k) {
      report.covarianceDeltas[j][k] = makeDelta(covO(j, k), covS(j, k));
    }
  }
}

FidelityReport buildFidelityReport(const Matrix& original, const Matrix& synthetic,
                                   int binCount) {
  FidelityReport report;
  report.binCount = binCount;
  momentDeltas(original, synthetic, report);
  const Index d = original.cols();
  report.tvPerColumn.resize(d);
  double sum = 0.0;
  for (Index j = 0; j < d; ++j) {
    report.tvPerColumn[j] = histogramTv(original.col(j), synthetic.col(j), binCount);
    sum += report.tvPerColumn[j];
  }
  report.tvAverage = sum / static_cast<double>(d);
  return report;
}

}  // namespace synthforge
