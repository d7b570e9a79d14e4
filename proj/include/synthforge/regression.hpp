#ifndef SYNTHFORGE_REGRESSION_HPP
#define SYNTHFORGE_REGRESSION_HPP

#include <string>
#include <vector>

#include "synthforge/common.hpp"
#include "synthforge/dataset.hpp"

namespace synthforge {

// (1-r)^4 (4r+1) on [0,1], zero beyond; compactly supported with unit radius.
double wendlandKernel(double distance);

struct Kernel {
  enum class Kind { Wendland, Gaussian };

  Kind kind = Kind::Wendland;
  double width = 1.0;  // Gaussian only; Wendland has fixed unit support

  void validate() const;
  double at(double distance) const;
  std::string name() const;
};

Kernel::Kind parseKernelKind(const std::string& name);

// Pairwise kernel matrix K(a_i, b_j).
Matrix gramMatrix(const Kernel& kernel, const Matrix& a, const Matrix& b);

struct KrrModel {
  Matrix trainingInputs;
  Vector coefficients;
  double lambda = 0.0;
  Kernel kernel;
};

// Solves (K + n*lambda*I) c = y, the stationarity condition of the
// 1/n-normalized ridge objective under the representer expansion.
KrrModel fitKrr(const Dataset& data, double lambda, const Kernel& kernel);

Vector predictKrr(const KrrModel& model, const Matrix& queries);

// Gaussian-weighted local average; queries where every weight underflows fall
// back to the nearest training response.
Vector nadarayaWatson(const Dataset& data, double bandwidth, const Matrix& queries);

struct CvGrid {
  std::vector<double> lambdaValues;
  int folds = 5;

  void validate() const;
};

// {0, 0.0002, 0.0004, ..., 0.002}
CvGrid defaultLambdaGrid();

// Mean held-out MSE over a seeded random fold partition; ties break toward
// the larger lambda.
double selectLambda(const Dataset& data, const CvGrid& grid, const Kernel& kernel,
                    std::uint64_t seed);

// 5-fold CV over the geometric grid {0.01 * 2^k, k = 0..10}.
double selectNwBandwidth(const Dataset& data, std::uint64_t seed);

}  // namespace synthforge

#endif
