#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "synthforge/audit.hpp"
#include "synthforge/hybrid.hpp"
#include "synthforge/lhs.hpp"

using namespace synthforge;

namespace {

Matrix uniformMatrix(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < n; ++i) x(i, j) = rng.uniform01();
  return x;
}

}  // namespace

TEST_CASE("pairing against an identical sample is the identity") {
  const Matrix x = uniformMatrix(20, 3, 1);
  const auto perm = nearestPairing(x, x);
  for (Index i = 0; i < 20; ++i) CHECK(perm[i] == i);
}

TEST_CASE("greedy pairing consumes the globally nearest rows first") {
  Matrix original(2, 1), synthetic(2, 1);
  original << 0.0, 10.0;
  synthetic << 9.0, 1.0;
  const auto perm = nearestPairing(original, synthetic);
  CHECK(perm[0] == 1);  // x1 = 0 takes s = 1
  CHECK(perm[1] == 0);  // x2 = 10 is left with s = 9
}

TEST_CASE("single row pairs trivially; mismatched shapes are rejected") {
  Matrix a(1, 2), b(1, 2);
  a << 0.1, 0.2;
  b << 0.9, 0.8;
  CHECK(nearestPairing(a, b)[0] == 0);
  Matrix c(2, 2);
  CHECK_THROWS_AS(nearestPairing(a, c), std::invalid_argument);
}

TEST_CASE("pairing is always a bijection") {
  for (std::uint64_t seed : {3ull, 5ull, 7ull}) {
    const Matrix x = uniformMatrix(50, 2, seed);
    const Matrix s = uniformMatrix(50, 2, seed + 100);
    auto perm = nearestPairing(x, s);
    std::sort(perm.begin(), perm.end());
    for (Index i = 0; i < 50; ++i) CHECK(perm[i] == i);
  }
}

TEST_CASE("mix endpoints are exact") {
  const Matrix x = uniformMatrix(30, 2, 11);
  const Matrix s = uniformMatrix(30, 2, 13);
  CHECK(((mix(x, s, 1.0) - x).cwiseAbs().maxCoeff()) == 0.0);
  CHECK(((mix(x, s, 0.0) - s).cwiseAbs().maxCoeff()) == 0.0);

  Matrix a(1, 1), b(1, 1);
  a << 0.2;
  b << 0.6;
  CHECK(mix(a, b, 0.5)(0, 0) == doctest::Approx(0.4));

  CHECK_THROWS_AS(mix(x, s, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mix(x, s, 1.1), std::invalid_argument);
}

TEST_CASE("alpha solver inverts the closed-form bound") {
  SUBCASE("worked example d=3") {
    // 1 - 0.002 / (1 - 0.9^(1/3))
    const double alpha = solveAlphaForBudget(10.0, 0.001, 3, 1.0);
    CHECK(std::abs(alpha - 0.9420468172721643) < 1e-9);
    CHECK(std::abs(lidBound(alpha, 0.001, 3, 1.0) - 10.0) < 1e-6);
  }
  SUBCASE("worked example d=1") {
    const double alpha = solveAlphaForBudget(0.025, 0.0001, 1, 1.0);
    CHECK(std::abs(alpha - 0.2) < 1e-12);
  }
  SUBCASE("full budget never binds") {
    const double alpha = solveAlphaForBudget(100.0, 0.01, 2, 1.0);
    CHECK(alpha < 1.0);
    CHECK(alpha > 1.0 - 1e-10);
  }
  SUBCASE("round trip across budget/eta/d/width grids") {
    for (double budget : {1.0, 5.0, 10.0, 50.0}) {
      for (double eta : {1e-4, 1e-3}) {
        for (Index d : {1, 3, 5}) {
          for (double width : {1.0, 2.0}) {
            const double alpha = solveAlphaForBudget(budget, eta, d, width);
            if (alpha > 0.0) {
              CHECK(std::abs(lidBound(alpha, eta, d, width) - budget) <= 1e-9);
            }
          }
        }
      }
    }
  }
  SUBCASE("vanishing budget is rejected") {
    CHECK_THROWS_AS(solveAlphaForBudget(1e-15, 0.001, 1, 1.0), std::runtime_error);
  }
  SUBCASE("unreachable budget clamps to zero") {
    CHECK(solveAlphaForBudget(1.0, 0.5, 1, 1.0) == 0.0);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(solveAlphaForBudget(0.0, 0.001, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solveAlphaForBudget(101.0, 0.001, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solveAlphaForBudget(10.0, -1.0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solveAlphaForBudget(10.0, 0.001, 0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("hybrid config requires exactly one mode") {
  HybridConfig both;
  both.alpha = 0.5;
  both.lidBudgetPercent = 10.0;
  CHECK_THROWS_AS(both.validate(), std::invalid_argument);
  HybridConfig neither;
  CHECK_THROWS_AS(neither.validate(), std::invalid_argument);
  HybridConfig ok;
  ok.alpha = 0.5;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("empirical LID of the mix is monotone in alpha on average") {
  double sumLow = 0.0, sumHigh = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    const Matrix x = uniformMatrix(200, 2, 500 + seed);
    Stage1Sampler sampler{Stage1Sampler::Kind::Random};
    const Matrix s = baselineSample(sampler, 200, 2, 900 + seed);
    const Matrix paired = applyPairing(s, nearestPairing(x, s));
    sumLow += computeLid(x, mix(x, paired, 0.2), 0.001).lidPercent;
    sumHigh += computeLid(x, mix(x, paired, 0.8), 0.001).lidPercent;
  }
  CHECK(sumLow <= sumHigh);
}
