#ifndef SYNTHFORGE_QUADRATURE_HPP
#define SYNTHFORGE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace synthforge {

// Gauss-Legendre nodes/weights on [-1,1] for a given order. An m-node rule
// integrates polynomials up to degree 2m-1 exactly.
struct GaussLegendreRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendreRule& get(int order);  // cached per order

  // integral of f over [a,b] under the affine map from [-1,1]
  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

double gaussLegendreIntegrate(const std::function<double(double)>& f, double a,
                              double b, int nodes);

}  // namespace synthforge

#endif
