#include <cmath>

#include "doctest.h"
#include "synthforge/regression.hpp"

using namespace synthforge;

namespace {

Dataset makeData(const Matrix& x, const Vector& y) {
  Dataset data;
  data.inputs = x;
  data.response = y;
  return data;
}

Matrix uniformMatrix(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < n; ++i) x(i, j) = rng.uniform01();
  return x;
}

}  // namespace

TEST_CASE("wendland kernel values") {
  CHECK(wendlandKernel(0.0) == 1.0);
  CHECK(wendlandKernel(1.0) == 0.0);
  CHECK(wendlandKernel(1.5) == 0.0);
  CHECK(wendlandKernel(0.5) == doctest::Approx(0.1875));
  CHECK_THROWS_AS(wendlandKernel(-0.1), std::invalid_argument);
}

TEST_CASE("kernel symmetry for random pairs") {
  const Matrix a = uniformMatrix(20, 3, 1);
  const Matrix b = uniformMatrix(15, 3, 2);
  for (Kernel kernel : {Kernel{Kernel::Kind::Wendland, 1.0},
                        Kernel{Kernel::Kind::Gaussian, 0.7}}) {
    const Matrix kab = gramMatrix(kernel, a, b);
    const Matrix kba = gramMatrix(kernel, b, a);
    CHECK((kab - kba.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("single-point closed forms") {
  Matrix x(1, 1);
  x << 0.3;
  Vector y(1);
  y << 2.0;

  SUBCASE("lambda = 1 halves the response") {
    const KrrModel model = fitKrr(makeData(x, y), 1.0, Kernel{});
    CHECK(model.coefficients(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predictKrr(model, x)(0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("lambda = 0 interpolates") {
    const KrrModel model = fitKrr(makeData(x, y), 0.0, Kernel{});
    CHECK(predictKrr(model, x)(0) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("gaussian kernel single point") {
    const double lambda = 0.25;
    Kernel gaussian{Kernel::Kind::Gaussian, 1.0};
    const KrrModel model = fitKrr(makeData(x, y), lambda, gaussian);
    CHECK(predictKrr(model, x)(0) == doctest::Approx(2.0 / 1.25).epsilon(1e-12));
  }
}

TEST_CASE("two points with disjoint wendland supports solve diagonally") {
  Matrix x(2, 1);
  x << 0.0, 5.0;
  Vector y(2);
  y << 3.0, -1.0;
  const KrrModel model = fitKrr(makeData(x, y), 0.5, Kernel{});
  CHECK(model.coefficients(0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(model.coefficients(1) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("prediction beyond every wendland support is zero") {
  const Matrix x = uniformMatrix(10, 2, 3);
  Vector y = Vector::Ones(10);
  const KrrModel model = fitKrr(makeData(x, y), 0.1, Kernel{});
  Matrix far(1, 2);
  far << 50.0, 50.0;
  CHECK(predictKrr(model, far)(0) == 0.0);
}

TEST_CASE("lambda = 0 interpolates the training data") {
  const Matrix x = uniformMatrix(25, 2, 5);
  Rng rng(6);
  Vector y(25);
  for (Index i = 0; i < 25; ++i) y(i) = rng.normal01();
  const KrrModel model = fitKrr(makeData(x, y), 0.0, Kernel{});
  CHECK((predictKrr(model, x) - y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("dimension mismatch and missing response are rejected") {
  const Matrix x = uniformMatrix(5, 2, 7);
  Vector y = Vector::Zero(5);
  const KrrModel model = fitKrr(makeData(x, y), 0.1, Kernel{});
  CHECK_THROWS_AS(predictKrr(model, uniformMatrix(3, 4, 8)), std::invalid_argument);

  Dataset noResponse;
  noResponse.inputs = x;
  CHECK_THROWS_AS(fitKrr(noResponse, 0.1, Kernel{}), std::invalid_argument);
  CHECK_THROWS_AS(fitKrr(makeData(x, y), -0.5, Kernel{}), std::invalid_argument);
}

TEST_CASE("duplicated inputs at lambda = 0 advise regularization") {
  Matrix x(2, 1);
  x << 0.4, 0.4;
  Vector y(2);
  y << 1.0, 2.0;
  CHECK_THROWS_WITH_AS(fitKrr(makeData(x, y), 0.0, Kernel{}),
                       doctest::Contains("lambda > 0"), std::invalid_argument);
}

TEST_CASE("representer residual against a dense oracle") {
  for (std::uint64_t seed : {11ull, 13ull, 17ull}) {
    const Index n = 20 + static_cast<Index>(seed);
    const Matrix x = uniformMatrix(n, 3, seed);
    Rng rng(seed + 50);
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = rng.normal01();
    const double lambda = 0.01;
    const KrrModel model = fitKrr(makeData(x, y), lambda, Kernel{});

    const Matrix k = gramMatrix(Kernel{}, x, x);
    const Matrix a = k + static_cast<double>(n) * lambda * Matrix::Identity(n, n);
    const double residual = (a * model.coefficients - y).cwiseAbs().maxCoeff();
    CHECK(residual < 1e-8 * (1.0 + y.cwiseAbs().maxCoeff()));

    // independent solve path
    const Vector oracle = Eigen::FullPivLU<Matrix>(a).solve(y);
    CHECK((oracle - model.coefficients).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("coefficient norm shrinks with lambda") {
  const Matrix x = uniformMatrix(40, 2, 19);
  Rng rng(23);
  Vector y(40);
  for (Index i = 0; i < 40; ++i) y(i) = rng.normal01();
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : defaultLambdaGrid().lambdaValues) {
    const KrrModel model = fitKrr(makeData(x, y), lambda, Kernel{});
    const double norm = model.coefficients.norm();
    CHECK(norm <= previous + 1e-12);
    previous = norm;
  }
}

TEST_CASE("gram matrix plus ridge stays positive definite") {
  // eigensolver oracle on random problems
  for (std::uint64_t seed : {29ull, 31ull}) {
    const Index n = 30;
    const Matrix x = uniformMatrix(n, 2, seed);
    const Matrix k = gramMatrix(Kernel{}, x, x);
    const double lambda = 0.004;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(
        k + static_cast<double>(n) * lambda * Matrix::Identity(n, n));
    CHECK(eig.eigenvalues().minCoeff() >= static_cast<double>(n) * lambda - 1e-8);
  }
}

TEST_CASE("nadaraya-watson") {
  SUBCASE("single training point dominates everywhere") {
    Matrix x(1, 1);
    x << 0.0;
    Vector y(1);
    y << 4.2;
    Matrix queries(3, 1);
    queries << -5.0, 0.0, 5.0;
    const Vector pred = nadarayaWatson(makeData(x, y), 1.0, queries);
    for (Index i = 0; i < 3; ++i) CHECK(pred(i) == doctest::Approx(4.2));
  }
  SUBCASE("equidistant neighbors average") {
    Matrix x(2, 1);
    x << -1.0, 1.0;
    Vector y(2);
    y << 0.0, 2.0;
    Matrix query(1, 1);
    query << 0.0;
    CHECK(nadarayaWatson(makeData(x, y), 0.5, query)(0) == doctest::Approx(1.0));
  }
  SUBCASE("huge bandwidth returns the sample mean") {
    const Matrix x = uniformMatrix(50, 2, 37);
    Rng rng(38);
    Vector y(50);
    for (Index i = 0; i < 50; ++i) y(i) = rng.uniform(0.0, 3.0);
    Matrix query(1, 2);
    query << 0.5, 0.5;
    const double pred = nadarayaWatson(makeData(x, y), 1e7, query)(0);
    CHECK(std::abs(pred - y.mean()) < 1e-6);
  }
  SUBCASE("underflowed weights fall back to the nearest response") {
    Matrix x(2, 1);
    x << 0.0, 1000.0;
    Vector y(2);
    y << -7.0, 7.0;
    Matrix query(1, 1);
    query << 400.0;  // both weights underflow at this bandwidth; 0 is nearer
    CHECK(nadarayaWatson(makeData(x, y), 1e-3, query)(0) == -7.0);
  }
  SUBCASE("bandwidth must be positive") {
    Matrix x(1, 1);
    x << 0.0;
    Vector y(1);
    y << 1.0;
    CHECK_THROWS_AS(nadarayaWatson(makeData(x, y), 0.0, x), std::invalid_argument);
  }
}

TEST_CASE("lambda selection") {
  SUBCASE("singleton grid") {
    const Matrix x = uniformMatrix(20, 1, 41);
    Vector y = x.col(0);
    CvGrid grid;
    grid.lambdaValues = {0.123};
    CHECK(selectLambda(makeData(x, y), grid, Kernel{}, 1) == 0.123);
  }
  SUBCASE("noiseless data prefers no shrinkage") {
    const Matrix x = uniformMatrix(60, 1, 43);
    Vector y = 2.0 * x.col(0);
    CvGrid grid;
    grid.lambdaValues = {0.0, 0.1};
    Kernel gaussian{Kernel::Kind::Gaussian, 1.0};
    CHECK(selectLambda(makeData(x, y), grid, gaussian, 2) == 0.0);
  }
  SUBCASE("pure noise prefers heavy shrinkage") {
    const Matrix x = uniformMatrix(60, 1, 47);
    Rng rng(48);
    Vector y(60);
    for (Index i = 0; i < 60; ++i) y(i) = rng.normal01();
    CvGrid grid;
    grid.lambdaValues = {0.0, 10.0};
    Kernel gaussian{Kernel::Kind::Gaussian, 0.05};
    CHECK(selectLambda(makeData(x, y), grid, gaussian, 3) == 10.0);
  }
  SUBCASE("fewer samples than folds is rejected") {
    const Matrix x = uniformMatrix(3, 1, 53);
    Vector y = x.col(0);
    CHECK_THROWS_AS(selectLambda(makeData(x, y), defaultLambdaGrid(), Kernel{}, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("nw bandwidth CV returns a grid member") {
  const Matrix x = uniformMatrix(40, 1, 59);
  Vector y = x.col(0).array().sin();
  const double h = selectNwBandwidth(makeData(x, y), 7);
  bool onGrid = false;
  for (int k = 0; k <= 10; ++k) onGrid |= (h == 0.01 * std::pow(2.0, k));
  CHECK(onGrid);
}
