#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "synthforge/quadrature.hpp"

using namespace synthforge;

TEST_CASE("constant integrand is exact for any node count") {
  for (int m : {1, 2, 5, 16}) {
    const double v = gaussLegendreIntegrate([](double) { return 1.0; }, 0.0, 1.0, m);
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
}

TEST_CASE("x^3 on [0,1] with 2 nodes") {
  const double v = gaussLegendreIntegrate([](double x) { return x * x * x; }, 0.0, 1.0, 2);
  CHECK(std::abs(v - 0.25) < 1e-12);
}

TEST_CASE("x^2 on [-1,1] with 5 nodes") {
  const double v = gaussLegendreIntegrate([](double x) { return x * x; }, -1.0, 1.0, 5);
  CHECK(std::abs(v - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("m-node rule integrates monomials up to degree 2m-1") {
  // oracle: analytic antiderivative of x^k over [a,b]
  const double a = -0.7, b = 1.3;
  for (int m = 2; m <= 10; ++m) {
    for (int k = 0; k <= 2 * m - 1; ++k) {
      const double expected =
          (std::pow(b, k + 1) - std::pow(a, k + 1)) / static_cast<double>(k + 1);
      const double got = gaussLegendreIntegrate(
          [k](double x) { return std::pow(x, k); }, a, b, m);
      CHECK_MESSAGE(std::abs(got - expected) < 1e-12,
                    "m=" << m << " k=" << k << " got=" << got
                         << " expected=" << expected);
    }
  }
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(gaussLegendreIntegrate([](double) { return 1.0; }, 0.0, 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussLegendreIntegrate([](double) { return 1.0; }, 1.0, 0.0, 3),
                  std::invalid_argument);
}

TEST_CASE("weights are positive and sum to 2") {
  for (int m = 1; m <= 20; ++m) {
    const auto& rule = GaussLegendreRule::get(m);
    double sum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 2.0) < 1e-12);
  }
}
