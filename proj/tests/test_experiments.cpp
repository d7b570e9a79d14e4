#include <cmath>

#include "doctest.h"
#include "synthforge/experiments.hpp"

using namespace synthforge;

TEST_CASE("nonlinear response values") {
  Vector x = Vector::Zero(3);
  CHECK(nonlinearResponse(x) == doctest::Approx(1.0));
  x << 1.0, 0.0, 0.0;
  CHECK(nonlinearResponse(x) == doctest::Approx(0.2));
  x << 2.0, 0.0, 0.0;
  CHECK(nonlinearResponse(x) == doctest::Approx(0.8));
  // continuity across the support boundary
  x << 1.0 - 1e-9, 0.0, 0.0;
  CHECK(std::abs(nonlinearResponse(x) - 0.2) < 1e-7);
}

TEST_CASE("nonlinear generator laws") {
  NonlinearScenario scenario;
  scenario.trainSize = 400;
  scenario.testSize = 150;
  scenario.publicSize = 100;
  scenario.seed = 5;
  const NonlinearData data = genNonlinear(scenario);
  CHECK(data.train.rows() == 400);
  CHECK(data.test.rows() == 150);
  CHECK(data.publicSet.rows() == 100);

  // test responses are exactly noise-free
  for (Index i = 0; i < data.test.rows(); ++i) {
    CHECK((*data.test.response)(i) ==
          doctest::Approx(nonlinearResponse(data.test.inputs.row(i))).epsilon(1e-15));
  }
  // train responses carry noise
  double maxGap = 0.0;
  for (Index i = 0; i < data.train.rows(); ++i) {
    maxGap = std::max(maxGap, std::abs((*data.train.response)(i) -
                                       nonlinearResponse(data.train.inputs.row(i))));
  }
  CHECK(maxGap > 0.0);

  // x3 = x1^2 + x2^2 + N(0,1): residual moments
  Vector residual = data.train.inputs.col(2) -
                    data.train.inputs.col(0).array().square().matrix() -
                    data.train.inputs.col(1).array().square().matrix();
  CHECK(std::abs(residual.mean()) < 0.2);
  const double var = (residual.array() - residual.mean()).square().mean();
  CHECK(std::abs(var - 1.0) < 0.25);
}

TEST_CASE("mismatch scenario redraws the test third column") {
  NonlinearScenario scenario;
  scenario.testSize = 2000;
  scenario.seed = 9;
  scenario.mismatchMean = 0.6;
  const Dataset test = genNonlinear(scenario).test;
  const double mean = test.inputs.col(2).mean();
  const double sd = std::sqrt((test.inputs.col(2).array() - mean).square().mean());
  CHECK(std::abs(mean - 0.6) < 0.02);
  CHECK(std::abs(sd - 0.14) < 0.02);
}

TEST_CASE("price-sale generator") {
  SUBCASE("default desk scenario has 1040 rows") {
    MarketScenario scenario;
    scenario.seed = 3;
    const MarketData market = genPriceSale(scenario);
    CHECK(market.data.rows() == 1040);
    CHECK(market.brand.size() == 1040);
  }
  SUBCASE("noiseless rows satisfy the exact log-linear relation") {
    MarketScenario scenario;
    scenario.noiseVariance = 0.0;
    scenario.seed = 4;
    const MarketData market = genPriceSale(scenario);
    for (Index r = 0; r < market.data.rows(); ++r) {
      const double beta = scenario.brandElasticities[market.brand[r]];
      CHECK((*market.data.response)(r) ==
            doctest::Approx(beta * market.data.inputs(r, 0)).epsilon(1e-12));
    }
  }
  SUBCASE("invalid scenarios are rejected") {
    MarketScenario flat;
    flat.brandElasticities = {-0.5};
    flat.brandIntercepts = {4.0};
    CHECK_THROWS_AS(genPriceSale(flat), std::invalid_argument);

    MarketScenario negativePrice;
    negativePrice.priceLow = -10.0;
    CHECK_THROWS_AS(genPriceSale(negativePrice), std::invalid_argument);
  }
}

TEST_CASE("elasticity estimation") {
  SUBCASE("noiseless recovery is exact") {
    MarketScenario scenario;
    scenario.noiseVariance = 0.0;
    scenario.seed = 7;
    const MarketData market = genPriceSale(scenario);
    for (int j = 0; j < 5; ++j) {
      std::vector<Index> rows;
      for (Index r = 0; r < market.data.rows(); ++r) {
        if (market.brand[r] == j) rows.push_back(r);
      }
      Vector x(rows.size()), y(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        x(i) = market.data.inputs(rows[i], 0);
        y(i) = (*market.data.response)(rows[i]);
      }
      CHECK(std::abs(estimateElasticity(x, y) - scenario.brandElasticities[j]) < 1e-12);
    }
  }
  SUBCASE("single point ratio") {
    Vector x(1), y(1);
    x << 1.0;
    y << 3.0;
    CHECK(estimateElasticity(x, y) == 3.0);
  }
  SUBCASE("orthogonal response gives zero") {
    Vector x(2), y(2);
    x << 1.0, 1.0;
    y << 1.0, -1.0;
    CHECK(estimateElasticity(x, y) == 0.0);
  }
  SUBCASE("all-zero inputs are rejected") {
    CHECK_THROWS_AS(estimateElasticity(Vector::Zero(3), Vector::Ones(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("marketing metrics") {
  const std::vector<double> betas = {-1.5, -1.7, -2.01, -1.98, -1.9};
  SUBCASE("identity estimates reproduce the closed forms") {
    const MarketingMetrics metrics = marketingMetrics(betas, betas);
    CHECK(metrics.omuPercent[0] == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(metrics.omuPercent[1] == doctest::Approx(100.0 / 0.7).epsilon(1e-12));
    for (std::size_t j = 0; j < betas.size(); ++j) {
      CHECK(metrics.omuDefined[j]);
      CHECK(metrics.oprDefined[j]);
      CHECK(metrics.oprPercent[j] == doctest::Approx(100.0).epsilon(1e-9));
    }
    CHECK(metrics.mapdPercent == 0.0);
  }
  SUBCASE("unit estimate marks OMU undefined") {
    const MarketingMetrics metrics = marketingMetrics({-2.0}, {-1.0});
    CHECK_FALSE(metrics.omuDefined[0]);
    CHECK_FALSE(metrics.oprDefined[0]);  // est + 1 == 0
  }
  SUBCASE("zero true beta is rejected") {
    CHECK_THROWS_AS(marketingMetrics({0.0}, {1.0}), std::invalid_argument);
  }
}

TEST_CASE("mse helpers") {
  Vector a(3), b(3);
  a << 1.0, 2.0, 3.0;
  b << 1.0, 2.0, 3.0;
  CHECK(evaluateMse(a, b) == 0.0);
  b << 2.0, 3.0, 4.0;
  CHECK(evaluateMse(a, b) == doctest::Approx(1.0));
  CHECK_THROWS_AS(evaluateMse(a, Vector::Zero(2)), std::invalid_argument);

  CHECK(deltaMse(0.002, 0.002) == 0.0);
  CHECK(deltaMse(0.002, 0.001) == doctest::Approx(50.0));
  CHECK_THROWS_AS(deltaMse(0.0, 0.001), std::invalid_argument);
}

TEST_CASE("trial aggregation") {
  SUBCASE("single trial has zero spread") {
    const AggregatedMetrics agg = runTrials(
        [](std::uint64_t seed) {
          MetricTable t;
          t.set("m", static_cast<double>(seed));
          return t;
        },
        1, 42, 1);
    CHECK(agg.values.at("m").mean == 42.0);
    CHECK(agg.values.at("m").stddev == 0.0);
  }
  SUBCASE("identical trials have zero spread") {
    const AggregatedMetrics agg = runTrials(
        [](std::uint64_t) {
          MetricTable t;
          t.set("m", 3.5);
          return t;
        },
        5, 0, 2);
    CHECK(agg.values.at("m").mean == 3.5);
    CHECK(agg.values.at("m").stddev == 0.0);
  }
  SUBCASE("distinct seeds spread") {
    const AggregatedMetrics agg = runTrials(
        [](std::uint64_t seed) {
          Rng rng(seed);
          MetricTable t;
          t.set("m", rng.uniform01());
          return t;
        },
        6, 10, 2);
    CHECK(agg.values.at("m").stddev > 0.0);
  }
}

namespace {

Dataset smallNonlinearTrain(Index n, std::uint64_t seed) {
  NonlinearScenario scenario;
  scenario.trainSize = n;
  scenario.testSize = 10;
  scenario.publicSize = 10;
  scenario.seed = seed;
  return genNonlinear(scenario).train;
}

}  // namespace

TEST_CASE("pipeline at alpha = 1 reproduces inputs and fitted values") {
  const Dataset data = smallNonlinearTrain(150, 21);
  SynthesisPlan plan;
  plan.hybrid.alpha = 1.0;
  plan.seed = 77;
  const PipelineResult result = runPipeline(data, plan);

  CHECK((result.synthetic.inputs - data.inputs).cwiseAbs().maxCoeff() == 0.0);
  CHECK(result.privacy.lidPercent == 100.0);

  const KrrModel model = fitKrr(data, result.lambdaSelected, plan.kernel);
  const Vector fitted = predictKrr(model, data.inputs);
  CHECK((*result.synthetic.response - fitted).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pipeline is deterministic") {
  const Dataset data = smallNonlinearTrain(120, 23);
  SynthesisPlan plan;
  plan.hybrid.alpha = 0.4;
  plan.seed = 5;
  const PipelineResult a = runPipeline(data, plan);
  const PipelineResult b = runPipeline(data, plan);
  CHECK((a.synthetic.inputs - b.synthetic.inputs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((*a.synthetic.response - *b.synthetic.response).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.privacy.lidPercent == b.privacy.lidPercent);
}

TEST_CASE("pipeline at alpha = 0 retains uniform means") {
  Rng rng(31);
  Dataset data;
  data.inputs.resize(1000, 2);
  Vector y(1000);
  for (Index i = 0; i < 1000; ++i) {
    data.inputs(i, 0) = rng.uniform01();
    data.inputs(i, 1) = rng.uniform01();
    y(i) = data.inputs(i, 0) + data.inputs(i, 1);
  }
  data.response = y;
  SynthesisPlan plan;
  plan.hybrid.alpha = 0.0;
  plan.seed = 3;
  const PipelineResult result = runPipeline(data, plan);
  for (const auto& delta : result.fidelity.meanDeltas) {
    CHECK(delta.isRelative);
    CHECK(delta.value < 0.05);
  }
}

TEST_CASE("pipeline solves alpha from a LID budget") {
  const Dataset data = smallNonlinearTrain(150, 29);
  SynthesisPlan plan;
  plan.hybrid.lidBudgetPercent = 10.0;
  plan.hybrid.eta = 0.001;
  plan.hybrid.rangeWidth = 1.0;
  plan.seed = 6;
  const PipelineResult result = runPipeline(data, plan);
  CHECK(result.alphaUsed ==
        doctest::Approx(solveAlphaForBudget(10.0, 0.001, 3, 1.0)).epsilon(1e-12));
  REQUIRE(result.privacy.theoreticalBoundPercent.has_value());
  CHECK(*result.privacy.theoreticalBoundPercent == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("synthetic responses are noise-free enough to train on") {
  // model trained on the alpha = 1 synthetic set does not lose to the
  // noisy-original model by more than 20 percent
  NonlinearScenario scenario;
  scenario.trainSize = 400;
  scenario.testSize = 200;
  scenario.publicSize = 10;
  scenario.seed = 33;
  const NonlinearData data = genNonlinear(scenario);

  SynthesisPlan plan;
  plan.hybrid.alpha = 1.0;
  plan.seed = 8;
  const PipelineResult result = runPipeline(data.train, plan);

  auto mseOf = [&](const Dataset& train) {
    const double lambda = selectLambda(train, defaultLambdaGrid(), Kernel{}, 99);
    return evaluateMse(predictKrr(fitKrr(train, lambda, Kernel{}), data.test.inputs),
                       *data.test.response);
  };
  const double mseSynthetic = mseOf(result.synthetic);
  const double mseOriginal = mseOf(data.train);
  CHECK(mseSynthetic <= 1.2 * mseOriginal);
}

TEST_CASE("marketing identity chain on noiseless data") {
  MarketScenario scenario;
  scenario.noiseVariance = 0.0;
  scenario.seed = 41;
  const MarketData market = genPriceSale(scenario);
  std::vector<double> estimates(5);
  for (int j = 0; j < 5; ++j) {
    std::vector<Index> rows;
    for (Index r = 0; r < market.data.rows(); ++r) {
      if (market.brand[r] == j) rows.push_back(r);
    }
    Vector x(rows.size()), y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x(i) = market.data.inputs(rows[i], 0);
      y(i) = (*market.data.response)(rows[i]);
    }
    estimates[j] = estimateElasticity(x, y);
  }
  const MarketingMetrics metrics =
      marketingMetrics(scenario.brandElasticities, estimates);
  CHECK(metrics.mapdPercent < 1e-9);
  for (int j = 0; j < 5; ++j) {
    CHECK(metrics.oprPercent[j] == doctest::Approx(100.0).epsilon(1e-9));
  }
}

TEST_CASE("unknown preset is rejected with the available names") {
  PresetRequest request;
  request.preset = "bogus";
  CHECK_THROWS_WITH_AS(runPreset(request), doctest::Contains("nonlinear"),
                       std::invalid_argument);
}

TEST_CASE("nonlinear preset emits one row per alpha per metric") {
  PresetRequest request;
  request.preset = "nonlinear";
  request.alphas = {0.0, 1.0};
  request.trials = 2;
  request.seed = 61;
  request.models = {"krr"};
  request.trainingSets = {"synthetic"};
  const std::vector<MetricRow> rows = runPreset(request);

  int syntheticRows = 0;
  bool positiveSpread = false;
  for (const auto& row : rows) {
    CHECK(row.preset == "nonlinear");
    CHECK(row.model == "krr");
    if (row.metric == "mse_synthetic") {
      ++syntheticRows;
      positiveSpread |= row.stddev > 0.0;
      CHECK(row.mean > 0.0);
    }
  }
  CHECK(syntheticRows == 2);
  // distinct trial seeds draw distinct noise
  CHECK(positiveSpread);
}

TEST_CASE("trial results do not depend on the thread count") {
  auto trialFn = [](std::uint64_t seed) {
    Rng rng(seed);
    MetricTable t;
    t.set("a", rng.uniform01());
    t.set("b", rng.normal01());
    return t;
  };
  const AggregatedMetrics serial = runTrials(trialFn, 7, 5, 1);
  const AggregatedMetrics threaded = runTrials(trialFn, 7, 5, 3);
  for (const auto& [key, metric] : serial.values) {
    CHECK(threaded.values.at(key).mean == metric.mean);
    CHECK(threaded.values.at(key).stddev == metric.stddev);
  }
}

TEST_CASE("min-max scaling runs the pipeline in unit space, emits raw units") {
  Rng rng(71);
  Dataset data;
  data.inputs.resize(150, 2);
  Vector y(150);
  for (Index i = 0; i < 150; ++i) {
    data.inputs(i, 0) = rng.uniform(100.0, 300.0);
    data.inputs(i, 1) = rng.uniform(-4.0, 4.0);
    y(i) = 0.01 * data.inputs(i, 0) + data.inputs(i, 1);
  }
  data.response = y;

  SynthesisPlan plan;
  plan.hybrid.alpha = 0.5;
  plan.scaling = Scaling::MinMax;
  plan.seed = 17;
  const PipelineResult result = runPipeline(data, plan);
  // outputs live in the original units
  CHECK(result.synthetic.inputs.col(0).minCoeff() > 50.0);
  CHECK(result.synthetic.inputs.col(0).maxCoeff() < 350.0);
  CHECK(result.synthetic.inputs.col(1).cwiseAbs().maxCoeff() < 10.0);

  Dataset constant = data;
  constant.inputs.col(1).setConstant(1.0);
  CHECK_THROWS_WITH_AS(runPipeline(constant, plan), doctest::Contains("scaling"),
                       std::invalid_argument);
}
