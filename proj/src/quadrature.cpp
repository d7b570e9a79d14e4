#include "synthforge/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace synthforge {

namespace {

GaussLegendreRule computeRule(int order) {
  GaussLegendreRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    // Newton iteration on P_order, starting from the Chebyshev-like guess
    double z = std::cos(M_PI * (i - 0.25) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[order - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i - 1] = w;
    rule.weights[order - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& GaussLegendreRule::get(int order) {
  if (order < 1) throw std::invalid_argument("GaussLegendreRule: order must be >= 1");
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, computeRule(order)).first;
  return it->second;
}

double GaussLegendreRule::integrate(const std::function<double(double)>& f, double a,
                                    double b) const {
  const double mid = 0.5 * (a + b);
  const double halfWidth = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    sum += weights[i] * f(mid + halfWidth * nodes[i]);
  }
  return sum * halfWidth;
}

double gaussLegendreIntegrate(const std::function<double(double)>& f, double a,
                              double b, int nodes) {
  if (nodes < 1) throw std::invalid_argument("gaussLegendreIntegrate: nodes must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gaussLegendreIntegrate: requires a < b");
  return GaussLegendreRule::get(nodes).integrate(f, a, b);
}

}  // namespace synthforge
