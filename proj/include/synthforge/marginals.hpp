#ifndef SYNTHFORGE_MARGINALS_HPP
#define SYNTHFORGE_MARGINALS_HPP

#include <vector>

#include "synthforge/common.hpp"

namespace synthforge {

struct ColumnSample {
  Vector values;
  int columnIndex = 0;
};

// Invertible empirical model of one column's marginal: Gaussian KDE density,
// tabulated CDF from cumulative Gauss-Legendre quadrature, and the matching
// generalized inverse. Immutable once fitted.
struct MarginalModel {
  double bandwidth = 0.0;
  double normalizer = 1.0;  // mass correction so the window integrates to 1
  Vector gridPoints;        // 512 evenly spaced points over the support window
  Vector density;           // normalized density at gridPoints
  Vector cdf;               // cumulative probability at gridPoints; 0 .. 1
  Vector centers;           // sample the model was fitted on

  double supportLo() const { return gridPoints(0); }
  double supportHi() const { return gridPoints(gridPoints.size() - 1); }

  // normalizer * (1/n) sum_k exp(-((x - x_k)/bandwidth)^2 / 2)
  double densityAt(double x) const;

  // finest CDF increment between adjacent grid points; the resolution term in
  // the ICDF round-trip guarantee
  double gridResolution() const;
};

MarginalModel fitKde(const ColumnSample& column, double bandwidth);

// Grid value maximizing mean held-out log-likelihood over `folds` round-robin
// folds; ties break toward the smaller bandwidth.
double selectBandwidth(const ColumnSample& column, const std::vector<double>& grid,
                       int folds);

// {0.05, 0.10, ..., 2.00}
std::vector<double> defaultBandwidthGrid();

double evalCdf(const MarginalModel& model, double x);

// inf{x : F(x) >= q}, linear interpolation on the CDF grid
double evalIcdf(const MarginalModel& model, double q);

}  // namespace synthforge

#endif
