#include "synthforge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace synthforge {

// ---------------------------------------------------------------- scenarios

void NonlinearScenario::validate() const {
  if (trainSize < 1 || testSize < 1 || publicSize < 1) {
    throw std::invalid_argument("NonlinearScenario: sizes must be >= 1");
  }
  if (!(noiseStd > 0.0)) {
    throw std::invalid_argument("NonlinearScenario: noiseStd must be positive");
  }
}

double nonlinearResponse(const Vector& x) {
  const double r = x.norm();
  const double bump = std::max(1.0 - r, 0.0);
  const double b2 = bump * bump;
  return b2 * b2 * bump * (1.0 + 5.0 * r) + 0.2 * r * r;
}

namespace {

Dataset drawNonlinearSet(Index n, double noiseStd, bool noiseFree,
                         const std::optional<double>& mismatchMean,
                         std::uint64_t seed) {
  Rng rng(seed);
  Dataset set;
  set.inputs.resize(n, 3);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const double x1 = rng.uniform01();
    const double x2 = rng.uniform01();
    double x3;
    if (mismatchMean) {
      x3 = *mismatchMean + 0.14 * rng.normal01();
    } else {
      x3 = x1 * x1 + x2 * x2 + rng.normal01();
    }
    set.inputs(i, 0) = x1;
    set.inputs(i, 1) = x2;
    set.inputs(i, 2) = x3;
    const double g = nonlinearResponse(set.inputs.row(i));
    y(i) = noiseFree ? g : g + noiseStd * rng.normal01();
  }
  set.response = std::move(y);
  set.columnNames = {"x1", "x2", "x3"};
  return set;
}

}  // namespace

NonlinearData genNonlinear(const NonlinearScenario& scenario) {
  scenario.validate();
  NonlinearData data;
  data.train = drawNonlinearSet(scenario.trainSize, scenario.noiseStd, false,
                                std::nullopt,
                                deriveSeed(scenario.seed, seedtag::scenarioTrain));
  data.test = drawNonlinearSet(scenario.testSize, scenario.noiseStd, true,
                               scenario.mismatchMean,
                               deriveSeed(scenario.seed, seedtag::scenarioTest));
  data.publicSet = drawNonlinearSet(scenario.publicSize, scenario.noiseStd, false,
                                    std::nullopt,
                                    deriveSeed(scenario.seed, seedtag::scenarioPublic));
  return data;
}

void MarketScenario::validate() const {
  if (brandElasticities.empty()) {
    throw std::invalid_argument("MarketScenario: need at least one brand");
  }
  for (double beta : brandElasticities) {
    if (!(beta < -1.0)) {
      throw std::invalid_argument(
          "MarketScenario: elasticities must be below -1 (OMU undefined otherwise)");
    }
  }
  if (brandIntercepts.size() != brandElasticities.size()) {
    throw std::invalid_argument("MarketScenario: intercepts/elasticities length mismatch");
  }
  if (weeks < 1 || customers < 1) {
    throw std::invalid_argument("MarketScenario: weeks and customers must be >= 1");
  }
  if (!(priceLow > 0.0)) {
    throw std::invalid_argument("MarketScenario: prices must be positive (ln domain)");
  }
  if (!(priceHigh >= priceLow)) {
    throw std::invalid_argument("MarketScenario: priceHigh must be >= priceLow");
  }
  if (!(noiseVariance >= 0.0)) {
    throw std::invalid_argument("MarketScenario: noiseVariance must be >= 0");
  }
  if (!(customerEffectStd >= 0.0)) {
    throw std::invalid_argument("MarketScenario: customerEffectStd must be >= 0");
  }
  if (customerEffects &&
      (customerEffects->rows() != customers ||
       customerEffects->cols() != brandCount())) {
    throw std::invalid_argument("MarketScenario: customerEffects must be customers x brands");
  }
}

MarketData genPriceSale(const MarketScenario& scenario) {
  scenario.validate();
  const Index brands = scenario.brandCount();
  const Index rows = scenario.customers * brands * scenario.weeks;
  Rng rng(scenario.seed);

  Matrix delta(scenario.customers, brands);
  if (scenario.customerEffects) {
    delta = *scenario.customerEffects;
  } else {
    for (Index c = 0; c < scenario.customers; ++c) {
      for (Index j = 0; j < brands; ++j) {
        delta(c, j) = scenario.customerEffectStd * rng.normal01();
      }
    }
  }

  const double noiseStd = std::sqrt(scenario.noiseVariance);
  MarketData out;
  out.data.inputs.resize(rows, 1);
  Vector adjusted(rows);
  out.rawLogSales.resize(rows);
  out.brand.resize(rows);

  Index r = 0;
  for (Index c = 0; c < scenario.customers; ++c) {
    for (Index j = 0; j < brands; ++j) {
      for (Index t = 0; t < scenario.weeks; ++t, ++r) {
        const double price = rng.uniform(scenario.priceLow, scenario.priceHigh);
        const double logPrice = std::log(price);
        const double noise = noiseStd * rng.normal01();
        const double logSales = scenario.brandIntercepts[j] + delta(c, j) +
                                scenario.brandElasticities[j] * logPrice + noise;
        out.data.inputs(r, 0) = logPrice;
        out.rawLogSales(r) = logSales;
        adjusted(r) = logSales - scenario.brandIntercepts[j] - delta(c, j);
        out.brand[r] = static_cast<int>(j);
      }
    }
  }
  out.data.response = std::move(adjusted);
  out.data.columnNames = {"log_price"};
  return out;
}

// ------------------------------------------------------------------ metrics

double estimateElasticity(const Vector& inputs, const Vector& responses) {
  if (inputs.size() != responses.size() || inputs.size() == 0) {
    throw std::invalid_argument("estimateElasticity: length mismatch or empty");
  }
  const double denom = inputs.squaredNorm();
  if (denom == 0.0) {
    throw std::invalid_argument("estimateElasticity: all inputs are zero");
  }
  return inputs.dot(responses) / denom;
}

MarketingMetrics marketingMetrics(const std::vector<double>& trueBetas,
                                  const std::vector<double>& estimatedBetas) {
  if (trueBetas.size() != estimatedBetas.size() || trueBetas.empty()) {
    throw std::invalid_argument("marketingMetrics: beta length mismatch or empty");
  }
  const std::size_t brands = trueBetas.size();
  MarketingMetrics metrics;
  metrics.omuPercent.assign(brands, 0.0);
  metrics.omuDefined.assign(brands, false);
  metrics.oprPercent.assign(brands, 0.0);
  metrics.oprDefined.assign(brands, false);

  double mapd = 0.0;
  for (std::size_t j = 0; j < brands; ++j) {
    const double beta = trueBetas[j];
    const double est = estimatedBetas[j];
    if (std::abs(beta) < 1e-12) {
      throw std::invalid_argument("marketingMetrics: true beta must be nonzero");
    }

    const double omuDenom = std::abs(est) - 1.0;
    if (std::abs(omuDenom) > 1e-12) {
      metrics.omuPercent[j] = 100.0 / omuDenom;
      metrics.omuDefined[j] = true;
    }

    if (std::abs(est + 1.0) > 1e-12) {
      const double ratio = (beta + 1.0) / (est + 1.0);
      const double base = ratio * (est / beta);
      if (base > 0.0) {
        metrics.oprPercent[j] = 100.0 * ratio * std::pow(base, beta);
        metrics.oprDefined[j] = true;
      }
    }

    mapd += std::abs((est - beta) / beta);
  }
  metrics.mapdPercent = 100.0 * mapd / static_cast<double>(brands);
  return metrics;
}

double evaluateMse(const Vector& predictions, const Vector& truth) {
  if (predictions.size() != truth.size() || predictions.size() == 0) {
    throw std::invalid_argument("evaluateMse: length mismatch or empty");
  }
  return (predictions - truth).squaredNorm() / static_cast<double>(truth.size());
}

double deltaMse(double msePublicOnly, double mseCombined) {
  if (!(msePublicOnly > 0.0)) {
    throw std::invalid_argument("deltaMse: msePublicOnly must be positive");
  }
  return (msePublicOnly - mseCombined) / msePublicOnly * 100.0;
}

// ------------------------------------------------------------ orchestration

AggregatedMetrics runTrials(const std::function<MetricTable(std::uint64_t)>& trialFn,
                            int trials, std::uint64_t baseSeed, int threads) {
  if (trials < 1) throw std::invalid_argument("runTrials: trials must be >= 1");
  std::vector<MetricTable> tables(trials);
  parallelFor(trials, threads, [&](Index t) {
    tables[t] = trialFn(baseSeed + static_cast<std::uint64_t>(t));
  });

  AggregatedMetrics agg;
  for (const auto& table : tables) {
    for (const auto& [key, value] : table.values) {
      (void)value;
      agg.values[key];  // materialize keys in sorted order
    }
  }
  for (auto& [key, metric] : agg.values) {
    std::vector<double> vals;
    vals.reserve(trials);
    for (const auto& table : tables) {
      auto it = table.values.find(key);
      if (it != table.values.end()) vals.push_back(it->second);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double sq = 0.0;
    for (double v : vals) sq += (v - mean) * (v - mean);
    metric.mean = mean;
    metric.stddev = vals.size() > 1 ? std::sqrt(sq / static_cast<double>(vals.size() - 1))
                                    : 0.0;
  }
  return agg;
}

// ---------------------------------------------------------------- presets

std::vector<std::string> presetNames() {
  return {"nonlinear", "price-sale", "mismatch-nonlinear", "mismatch-price"};
}

namespace {

std::string fmtAlpha(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

// Shared stage-1 + synthesizer work, reused across alphas within a trial.
struct PreparedSynthesis {
  Matrix paired;          // pure synthetic rows, pairing applied
  KrrModel synthesizer;   // KRR fit on the original data
};

PreparedSynthesis prepareSynthesis(const Dataset& data, const Stage1Sampler& sampler,
                                   std::uint64_t seed) {
  PreparedSynthesis prep;
  Matrix pure;
  if (sampler.kind == Stage1Sampler::Kind::SH) {
    std::vector<MarginalModel> models;
    models.reserve(data.cols());
    for (Index j = 0; j < data.cols(); ++j) {
      ColumnSample column{data.inputs.col(j), static_cast<int>(j)};
      models.push_back(fitKde(column, selectBandwidth(column, defaultBandwidthGrid(), 5)));
    }
    pure = synthesize(data, models, deriveSeed(seed, seedtag::stage1));
  } else {
    pure = baselineSample(sampler, data.rows(), data.cols(),
                          deriveSeed(seed, seedtag::stage1));
  }
  prep.paired = applyPairing(pure, nearestPairing(data.inputs, pure));

  const double lambda =
      selectLambda(data, defaultLambdaGrid(), Kernel{}, deriveSeed(seed, seedtag::cvFolds));
  prep.synthesizer = fitKrr(data, lambda, Kernel{});
  return prep;
}

Dataset mixedDataset(const Dataset& data, const PreparedSynthesis& prep, double alpha) {
  Dataset out;
  out.inputs = mix(data.inputs, prep.paired, alpha);
  out.response = predictKrr(prep.synthesizer, out.inputs);
  out.columnNames = data.columnNames;
  return out;
}

Dataset concatDatasets(const Dataset& a, const Dataset& b) {
  Dataset out;
  out.inputs.resize(a.rows() + b.rows(), a.cols());
  out.inputs << a.inputs, b.inputs;
  Vector y(a.rows() + b.rows());
  y << *a.response, *b.response;
  out.response = std::move(y);
  out.columnNames = a.columnNames;
  return out;
}

double publicModelMse(const std::string& model, const Dataset& train,
                      const Dataset& test, std::uint64_t seed) {
  if (model == "krr") {
    const double lambda = selectLambda(train, defaultLambdaGrid(), Kernel{}, seed);
    return evaluateMse(predictKrr(fitKrr(train, lambda, Kernel{}), test.inputs),
                       *test.response);
  }
  if (model == "nwk") {
    const double h = selectNwBandwidth(train, seed);
    return evaluateMse(nadarayaWatson(train, h, test.inputs), *test.response);
  }
  throw std::invalid_argument("unknown public model '" + model + "'");
}

MetricTable nonlinearTrial(std::uint64_t seed, const PresetRequest& req) {
  NonlinearScenario scenario;
  scenario.seed = seed;
  const NonlinearData data = genNonlinear(scenario);
  const PreparedSynthesis prep = prepareSynthesis(data.train, req.sampler, seed);

  const bool wantOriginal = std::count(req.trainingSets.begin(), req.trainingSets.end(),
                                       "original") > 0;
  const bool wantPublic = std::count(req.trainingSets.begin(), req.trainingSets.end(),
                                     "public") > 0;
  const bool wantSynthetic = std::count(req.trainingSets.begin(),
                                        req.trainingSets.end(), "synthetic") > 0;
  const bool wantCombined = std::count(req.trainingSets.begin(), req.trainingSets.end(),
                                       "combined") > 0;

  MetricTable table;
  std::map<std::string, double> publicMse;
  for (const auto& model : req.models) {
    if (wantOriginal) {
      const double v = publicModelMse(model, data.train, data.test,
                                      deriveSeed(seed, seedtag::cvFolds + 10));
      for (double alpha : req.alphas) {
        table.set("alpha=" + fmtAlpha(alpha) + "/" + model + "/mse_original", v);
      }
    }
    if (wantPublic || wantCombined) {
      publicMse[model] = publicModelMse(model, data.publicSet, data.test,
                                        deriveSeed(seed, seedtag::cvFolds + 11));
      if (wantPublic) {
        for (double alpha : req.alphas) {
          table.set("alpha=" + fmtAlpha(alpha) + "/" + model + "/mse_public",
                    publicMse[model]);
        }
      }
    }
  }

  for (double alpha : req.alphas) {
    const Dataset synthetic = mixedDataset(data.train, prep, alpha);
    const std::string prefix = "alpha=" + fmtAlpha(alpha) + "/";
    for (const auto& model : req.models) {
      if (wantSynthetic) {
        table.set(prefix + model + "/mse_synthetic",
                  publicModelMse(model, synthetic, data.test,
                                 deriveSeed(seed, seedtag::cvFolds + 12)));
      }
      if (wantCombined) {
        const double combined =
            publicModelMse(model, concatDatasets(synthetic, data.publicSet), data.test,
                           deriveSeed(seed, seedtag::cvFolds + 13));
        table.set(prefix + model + "/mse_combined", combined);
        table.set(prefix + model + "/delta_mse_percent",
                  deltaMse(publicMse[model], combined));
      }
    }
  }
  return table;
}

MetricTable priceSaleTrial(std::uint64_t seed, const PresetRequest& req) {
  MarketScenario scenario;
  scenario.seed = seed;
  const MarketData market = genPriceSale(scenario);
  const Index brands = scenario.brandCount();

  // slice per brand
  std::vector<Dataset> brandData(brands);
  for (Index j = 0; j < brands; ++j) {
    std::vector<Index> rows;
    for (Index r = 0; r < market.data.rows(); ++r) {
      if (market.brand[r] == j) rows.push_back(r);
    }
    brandData[j].inputs.resize(rows.size(), 1);
    Vector y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      brandData[j].inputs(i, 0) = market.data.inputs(rows[i], 0);
      y(i) = (*market.data.response)(rows[i]);
    }
    brandData[j].response = std::move(y);
  }

  std::vector<double> betaOriginal(brands);
  std::vector<PreparedSynthesis> preps(brands);
  for (Index j = 0; j < brands; ++j) {
    betaOriginal[j] =
        estimateElasticity(brandData[j].inputs.col(0), *brandData[j].response);
    preps[j] = prepareSynthesis(brandData[j], req.sampler,
                                deriveSeed(seed, 100 + static_cast<std::uint64_t>(j)));
  }
  const MarketingMetrics original =
      marketingMetrics(scenario.brandElasticities, betaOriginal);

  MetricTable table;
  for (double alpha : req.alphas) {
    const std::string prefix = "alpha=" + fmtAlpha(alpha) + "/ls/";
    std::vector<double> betaSynthetic(brands);
    Matrix allOriginal(market.data.rows(), 1), allSynthetic(market.data.rows(), 1);
    Index at = 0;
    for (Index j = 0; j < brands; ++j) {
      const Dataset synthetic = mixedDataset(brandData[j], preps[j], alpha);
      betaSynthetic[j] =
          estimateElasticity(synthetic.inputs.col(0), *synthetic.response);
      allOriginal.block(at, 0, brandData[j].rows(), 1) = brandData[j].inputs;
      allSynthetic.block(at, 0, synthetic.rows(), 1) = synthetic.inputs;
      at += brandData[j].rows();
    }
    const MarketingMetrics synthetic =
        marketingMetrics(scenario.brandElasticities, betaSynthetic);

    table.set(prefix + "mapd_original", original.mapdPercent);
    table.set(prefix + "mapd_synthetic", synthetic.mapdPercent);
    table.set(prefix + "lid_percent",
              computeLid(allOriginal, allSynthetic, 0.0001).lidPercent);
    for (Index j = 0; j < brands; ++j) {
      const std::string brandTag = "brand" + std::to_string(j + 1);
      if (original.omuDefined[j]) {
        table.set(prefix + "omu_original_" + brandTag, original.omuPercent[j]);
      }
      if (synthetic.omuDefined[j]) {
        table.set(prefix + "omu_synthetic_" + brandTag, synthetic.omuPercent[j]);
      }
      if (synthetic.oprDefined[j]) {
        table.set(prefix + "opr_synthetic_" + brandTag, synthetic.oprPercent[j]);
      }
    }
  }
  return table;
}

MetricTable mismatchNonlinearTrial(std::uint64_t seed, const PresetRequest& req) {
  const double alpha = req.alphas.size() == 1 ? req.alphas.front() : 0.5;
  NonlinearScenario scenario;
  scenario.seed = seed;
  const NonlinearData base = genNonlinear(scenario);
  const PreparedSynthesis prep = prepareSynthesis(base.train, req.sampler, seed);
  const Dataset synthetic = mixedDataset(base.train, prep, alpha);
  const Dataset combined = concatDatasets(synthetic, base.publicSet);

  // models are fixed per trial; only the test distribution sweeps
  const double lambdaPublic = selectLambda(base.publicSet, defaultLambdaGrid(), Kernel{},
                                           deriveSeed(seed, seedtag::cvFolds + 11));
  const KrrModel publicModel = fitKrr(base.publicSet, lambdaPublic, Kernel{});
  const double lambdaCombined = selectLambda(combined, defaultLambdaGrid(), Kernel{},
                                             deriveSeed(seed, seedtag::cvFolds + 13));
  const KrrModel combinedModel = fitKrr(combined, lambdaCombined, Kernel{});

  MetricTable table;
  for (int k = 1; k <= 10; ++k) {
    const double mu = 0.1 * k;
    NonlinearScenario shifted = scenario;
    shifted.mismatchMean = mu;
    const Dataset test = genNonlinear(shifted).test;
    const double msePublic =
        evaluateMse(predictKrr(publicModel, test.inputs), *test.response);
    const double mseCombined =
        evaluateMse(predictKrr(combinedModel, test.inputs), *test.response);
    std::ostringstream tag;
    tag << "mu=" << mu;
    table.set("krr/" + tag.str() + "/mse_public", msePublic);
    table.set("krr/" + tag.str() + "/mse_combined", mseCombined);
    table.set("krr/" + tag.str() + "/delta_mse_percent",
              deltaMse(msePublic, mseCombined));
    table.set("krr/" + tag.str() + "/tv_train_test",
              histogramTv(base.train.inputs.col(2), test.inputs.col(2), 50));
  }
  return table;
}

MetricTable mismatchPriceTrial(std::uint64_t seed, const PresetRequest& req) {
  const double alpha = req.alphas.size() == 1 ? req.alphas.front() : 0.5;
  MarketScenario scenario;
  scenario.seed = seed;
  const MarketData market = genPriceSale(scenario);
  const Index brands = scenario.brandCount();

  // tiny public set: 4 rows per brand, mirroring the 20-row public marketing data
  MarketScenario publicScenario = scenario;
  publicScenario.weeks = 1;
  publicScenario.seed = deriveSeed(seed, 55);
  const MarketData publicMarket = genPriceSale(publicScenario);

  MetricTable table;
  Rng testRng(deriveSeed(seed, 56));
  for (int k = 1; k <= 10; ++k) {
    const double sigma = 0.2 * k;
    double msePublicTotal = 0.0, mseCombinedTotal = 0.0;
    for (Index j = 0; j < brands; ++j) {
      auto slice = [&](const MarketData& md) {
        Dataset ds;
        std::vector<Index> rows;
        for (Index r = 0; r < md.data.rows(); ++r) {
          if (md.brand[r] == j) rows.push_back(r);
        }
        ds.inputs.resize(rows.size(), 1);
        Vector y(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          ds.inputs(i, 0) = md.data.inputs(rows[i], 0);
          y(i) = (*md.data.response)(rows[i]);
        }
        ds.response = std::move(y);
        return ds;
      };
      const Dataset brandTrain = slice(market);
      const Dataset brandPublic = slice(publicMarket);
      const PreparedSynthesis prep = prepareSynthesis(
          brandTrain, req.sampler, deriveSeed(seed, 200 + static_cast<std::uint64_t>(j)));
      const Dataset synthetic = mixedDataset(brandTrain, prep, alpha);

      // mismatched test inputs: clean log prices plus N(0, sigma^2)
      const Index testRows = 52;
      Matrix testX(testRows, 1);
      Vector testY(testRows);
      for (Index i = 0; i < testRows; ++i) {
        const double clean =
            std::log(testRng.uniform(scenario.priceLow, scenario.priceHigh));
        const double x = clean + sigma * testRng.normal01();
        testX(i, 0) = x;
        testY(i) = scenario.brandElasticities[j] * x;
      }

      const double betaPublic =
          estimateElasticity(brandPublic.inputs.col(0), *brandPublic.response);
      const Dataset combined = concatDatasets(synthetic, brandPublic);
      const double betaCombined =
          estimateElasticity(combined.inputs.col(0), *combined.response);
      msePublicTotal += evaluateMse(betaPublic * testX.col(0), testY);
      mseCombinedTotal += evaluateMse(betaCombined * testX.col(0), testY);
    }
    std::ostringstream tag;
    tag << "sigma=" << sigma;
    table.set("ls/" + tag.str() + "/mse_public", msePublicTotal / brands);
    table.set("ls/" + tag.str() + "/mse_combined", mseCombinedTotal / brands);
    table.set("ls/" + tag.str() + "/delta_mse_percent",
              deltaMse(msePublicTotal / brands, mseCombinedTotal / brands));
  }
  return table;
}

std::vector<MetricRow> rowsFromAggregate(const std::string& preset,
                                         const AggregatedMetrics& agg,
                                         double fixedAlpha) {
  std::vector<MetricRow> rows;
  for (const auto& [key, metric] : agg.values) {
    MetricRow row;
    row.preset = preset;
    row.alpha = fixedAlpha;
    std::string rest = key;
    if (rest.rfind("alpha=", 0) == 0) {
      const auto slash = rest.find('/');
      row.alpha = std::stod(rest.substr(6, slash - 6));
      rest = rest.substr(slash + 1);
    }
    const auto slash = rest.find('/');
    row.model = rest.substr(0, slash);
    row.metric = rest.substr(slash + 1);
    row.mean = metric.mean;
    row.stddev = metric.stddev;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<MetricRow> runPreset(const PresetRequest& request) {
  PresetRequest req = request;
  if (req.trials <= 0) {
    req.trials = (req.preset == "nonlinear" || req.preset == "mismatch-nonlinear") ? 20 : 10;
  }
  std::function<MetricTable(std::uint64_t)> trialFn;
  double fixedAlpha = 0.0;

  if (req.preset == "nonlinear") {
    if (req.alphas.empty()) req.alphas = {0.0, 0.2, 0.5, 0.8, 1.0};
    trialFn = [req](std::uint64_t seed) { return nonlinearTrial(seed, req); };
  } else if (req.preset == "price-sale") {
    if (req.alphas.empty()) req.alphas = {0.2, 0.5, 0.8, 1.0};
    trialFn = [req](std::uint64_t seed) { return priceSaleTrial(seed, req); };
  } else if (req.preset == "mismatch-nonlinear") {
    if (req.alphas.empty()) req.alphas = {0.5};
    fixedAlpha = req.alphas.front();
    trialFn = [req](std::uint64_t seed) { return mismatchNonlinearTrial(seed, req); };
  } else if (req.preset == "mismatch-price") {
    if (req.alphas.empty()) req.alphas = {0.5};
    fixedAlpha = req.alphas.front();
    trialFn = [req](std::uint64_t seed) { return mismatchPriceTrial(seed, req); };
  } else {
    std::string names;
    for (const auto& name : presetNames()) names += " " + name;
    throw std::invalid_argument("unknown preset '" + req.preset + "'; presets:" + names);
  }

  const AggregatedMetrics agg = runTrials(trialFn, req.trials, req.seed, req.threads);
  return rowsFromAggregate(req.preset, agg, fixedAlpha);
}

}  // namespace synthforge
