#include "synthforge/regression.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace synthforge {

double wendlandKernel(double distance) {
  if (distance < 0.0) {
    throw std::invalid_argument("wendlandKernel: distance must be non-negative");
  }
  if (distance > 1.0) return 0.0;
  const double s = 1.0 - distance;
  const double s2 = s * s;
  return s2 * s2 * (4.0 * distance + 1.0);
}

void Kernel::validate() const {
  if (kind == Kind::Gaussian && !(width > 0.0)) {
    throw std::invalid_argument("Kernel: Gaussian width must be positive");
  }
}

double Kernel::at(double distance) const {
  if (kind == Kind::Wendland) return wendlandKernel(distance);
  const double t = distance / width;
  return std::exp(-0.5 * t * t);
}

std::string Kernel::name() const {
  return kind == Kind::Wendland ? "wendland" : "gaussian";
}

Kernel::Kind parseKernelKind(const std::string& name) {
  if (name == "wendland") return Kernel::Kind::Wendland;
  if (name == "gaussian") return Kernel::Kind::Gaussian;
  throw std::invalid_argument("unknown kernel '" + name +
                              "' (expected wendland|gaussian)");
}

namespace {

// squared distances via the Gram expansion; clamped against roundoff
Matrix squaredDistances(const Matrix& a, const Matrix& b) {
  Vector an = a.rowwise().squaredNorm();
  Vector bn = b.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * a * b.transpose());
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  return d2.cwiseMax(0.0);
}

Vector gaussianWeightsAt(const Matrix& train, const Vector& query, double h) {
  return ((train.rowwise() - query.transpose()).rowwise().squaredNorm() /
          (-2.0 * h * h))
      .array()
      .exp();
}

}  // namespace

Matrix gramMatrix(const Kernel& kernel, const Matrix& a, const Matrix& b) {
  kernel.validate();
  Matrix d2 = squaredDistances(a, b);
  if (kernel.kind == Kernel::Kind::Wendland) {
    return d2.unaryExpr([](double s) {
      if (s >= 1.0) return 0.0;
      const double r = std::sqrt(s);
      const double t = 1.0 - r;
      const double t2 = t * t;
      return t2 * t2 * (4.0 * r + 1.0);
    });
  }
  const double invTwoW2 = 1.0 / (2.0 * kernel.width * kernel.width);
  return (d2.array() * -invTwoW2).exp();
}

namespace {

bool hasDuplicateRows(const Matrix& x) {
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = i + 1; j < x.rows(); ++j) {
      if ((x.row(i) - x.row(j)).cwiseAbs().maxCoeff() == 0.0) return true;
    }
  }
  return false;
}

Vector solveKrrSystem(const Matrix& k, const Matrix& inputs, const Vector& y,
                      double lambda) {
  const Index n = k.rows();
  Matrix a = k + static_cast<double>(n) * lambda * Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) return llt.solve(y);

  if (lambda == 0.0 && hasDuplicateRows(inputs)) {
    throw std::invalid_argument(
        "fitKrr: singular system at lambda = 0 with duplicated inputs; use lambda > 0");
  }
  const double jitter = 1e-10 * k.trace() / static_cast<double>(n);
  std::cerr << "synthforge: fitKrr: factorization failed, retrying with jitter "
            << jitter << "\n";
  Eigen::LLT<Matrix> retry(a + jitter * Matrix::Identity(n, n));
  if (retry.info() != Eigen::Success) {
    throw std::runtime_error("fitKrr: Cholesky factorization failed");
  }
  return retry.solve(y);
}

}  // namespace

KrrModel fitKrr(const Dataset& data, double lambda, const Kernel& kernel) {
  data.validate();
  if (!data.hasResponse()) throw std::invalid_argument("fitKrr: data has no response");
  if (lambda < 0.0) throw std::invalid_argument("fitKrr: lambda must be non-negative");
  kernel.validate();

  Matrix k = gramMatrix(kernel, data.inputs, data.inputs);
  if (!k.allFinite()) throw std::runtime_error("fitKrr: kernel matrix is not finite");

  KrrModel model;
  model.trainingInputs = data.inputs;
  model.lambda = lambda;
  model.kernel = kernel;
  model.coefficients = solveKrrSystem(k, data.inputs, *data.response, lambda);
  return model;
}

Vector predictKrr(const KrrModel& model, const Matrix& queries) {
  if (queries.cols() != model.trainingInputs.cols()) {
    throw std::invalid_argument("predictKrr: query dimension mismatch");
  }
  return gramMatrix(model.kernel, queries, model.trainingInputs) * model.coefficients;
}

Vector nadarayaWatson(const Dataset& data, double bandwidth, const Matrix& queries) {
  data.validate();
  if (!data.hasResponse()) {
    throw std::invalid_argument("nadarayaWatson: data has no response");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("nadarayaWatson: bandwidth must be positive");
  }
  if (queries.cols() != data.inputs.cols()) {
    throw std::invalid_argument("nadarayaWatson: query dimension mismatch");
  }
  const Vector& y = *data.response;
  Vector out(queries.rows());
  for (Index q = 0; q < queries.rows(); ++q) {
    const Vector query = queries.row(q);
    Vector w = gaussianWeightsAt(data.inputs, query, bandwidth);
    const double denom = w.sum();
    if (denom > 0.0) {
      out(q) = w.dot(y) / denom;
    } else {
      // all weights underflowed: nearest training response
      Index nearest = 0;
      (data.inputs.rowwise() - query.transpose())
          .rowwise()
          .squaredNorm()
          .minCoeff(&nearest);
      out(q) = y(nearest);
    }
  }
  return out;
}

void CvGrid::validate() const {
  if (lambdaValues.empty()) throw std::invalid_argument("CvGrid: empty lambda grid");
  for (double v : lambdaValues) {
    if (v < 0.0) throw std::invalid_argument("CvGrid: lambda values must be >= 0");
  }
  if (folds < 2) throw std::invalid_argument("CvGrid: folds must be >= 2");
}

CvGrid defaultLambdaGrid() {
  CvGrid grid;
  grid.lambdaValues.push_back(0.0);
  for (int k = 1; k <= 10; ++k) grid.lambdaValues.push_back(0.0002 * k);
  return grid;
}

namespace {

struct FoldSplit {
  std::vector<std::vector<Index>> train;
  std::vector<std::vector<Index>> test;
};

FoldSplit makeFolds(Index n, int folds, std::uint64_t seed) {
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(idx);
  FoldSplit split;
  split.train.resize(folds);
  split.test.resize(folds);
  for (Index pos = 0; pos < n; ++pos) {
    const int fold = static_cast<int>(pos % folds);
    split.test[fold].push_back(idx[pos]);
  }
  for (int f = 0; f < folds; ++f) {
    for (int g = 0; g < folds; ++g) {
      if (g == f) continue;
      split.train[f].insert(split.train[f].end(), split.test[g].begin(),
                            split.test[g].end());
    }
  }
  return split;
}

Matrix submatrix(const Matrix& m, const std::vector<Index>& rows,
                 const std::vector<Index>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

}  // namespace

double selectLambda(const Dataset& data, const CvGrid& grid, const Kernel& kernel,
                    std::uint64_t seed) {
  data.validate();
  grid.validate();
  if (!data.hasResponse()) throw std::invalid_argument("selectLambda: data has no response");
  const Index n = data.rows();
  if (n < grid.folds) {
    throw std::invalid_argument("selectLambda: fewer samples than folds");
  }
  if (grid.lambdaValues.size() == 1) return grid.lambdaValues.front();

  const FoldSplit split = makeFolds(n, grid.folds, seed);
  // one Gram for the whole dataset; folds slice it
  const Matrix k = gramMatrix(kernel, data.inputs, data.inputs);
  const Vector& y = *data.response;

  double bestLambda = grid.lambdaValues.front();
  double bestMse = std::numeric_limits<double>::infinity();
  std::vector<Matrix> kTrain(grid.folds), kCross(grid.folds);
  std::vector<Vector> yTrain(grid.folds), yTest(grid.folds);
  for (int f = 0; f < grid.folds; ++f) {
    kTrain[f] = submatrix(k, split.train[f], split.train[f]);
    kCross[f] = submatrix(k, split.test[f], split.train[f]);
    yTrain[f].resize(split.train[f].size());
    for (std::size_t i = 0; i < split.train[f].size(); ++i) {
      yTrain[f](i) = y(split.train[f][i]);
    }
    yTest[f].resize(split.test[f].size());
    for (std::size_t i = 0; i < split.test[f].size(); ++i) {
      yTest[f](i) = y(split.test[f][i]);
    }
  }

  for (double lambda : grid.lambdaValues) {
    double mse = 0.0;
    for (int f = 0; f < grid.folds; ++f) {
      const Index m = kTrain[f].rows();
      Matrix a = kTrain[f] + static_cast<double>(m) * lambda * Matrix::Identity(m, m);
      Eigen::LLT<Matrix> llt(a);
      if (llt.info() != Eigen::Success) {
        const double jitter = 1e-10 * kTrain[f].trace() / static_cast<double>(m);
        llt.compute(a + jitter * Matrix::Identity(m, m));
        if (llt.info() != Eigen::Success) {
          mse = std::numeric_limits<double>::infinity();
          break;
        }
      }
      Vector c = llt.solve(yTrain[f]);
      mse += (kCross[f] * c - yTest[f]).squaredNorm() /
             static_cast<double>(yTest[f].size());
    }
    mse /= grid.folds;
    if (mse < bestMse || (mse == bestMse && lambda > bestLambda)) {
      bestMse = mse;
      bestLambda = lambda;
    }
  }
  return bestLambda;
}

double selectNwBandwidth(const Dataset& data, std::uint64_t seed) {
  data.validate();
  if (!data.hasResponse()) {
    throw std::invalid_argument("selectNwBandwidth: data has no response");
  }
  const int folds = 5;
  const Index n = data.rows();
  if (n < folds) throw std::invalid_argument("selectNwBandwidth: fewer samples than folds");

  const FoldSplit split = makeFolds(n, folds, seed);
  const Vector& y = *data.response;

  double bestH = 0.01;
  double bestMse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 10; ++k) {
    const double h = 0.01 * std::pow(2.0, k);
    double mse = 0.0;
    for (int f = 0; f < folds; ++f) {
      Dataset trainSet;
      trainSet.inputs = submatrix(data.inputs, split.train[f],
                                  [&] {
                                    std::vector<Index> all(data.cols());
                                    std::iota(all.begin(), all.end(), Index{0});
                                    return all;
                                  }());
      Vector ytr(split.train[f].size());
      for (std::size_t i = 0; i < split.train[f].size(); ++i) {
        ytr(i) = y(split.train[f][i]);
      }
      trainSet.response = ytr;
      Matrix queries(split.test[f].size(), data.cols());
      Vector yte(split.test[f].size());
      for (std::size_t i = 0; i < split.test[f].size(); ++i) {
        queries.row(i) = data.inputs.row(split.test[f][i]);
        yte(i) = y(split.test[f][i]);
      }
      Vector pred = nadarayaWatson(trainSet, h, queries);
      mse += (pred - yte).squaredNorm() / static_cast<double>(yte.size());
    }
    mse /= folds;
    if (mse < bestMse || (mse == bestMse && h > bestH)) {
      bestMse = mse;
      bestH = h;
    }
  }
  return bestH;
}

}  // namespace synthforge
