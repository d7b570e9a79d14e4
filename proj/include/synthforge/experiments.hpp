#ifndef SYNTHFORGE_EXPERIMENTS_HPP
#define SYNTHFORGE_EXPERIMENTS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthforge/dataset.hpp"
#include "synthforge/pipeline.hpp"

namespace synthforge {

// ---------------------------------------------------------------- scenarios

struct NonlinearScenario {
  Index trainSize = 1000;
  Index testSize = 200;
  Index publicSize = 1000;
  double noiseStd = 0.1;
  std::uint64_t seed = 0;
  std::optional<double> mismatchMean;  // test x3 ~ N(mu, 0.14^2) when set

  void validate() const;
};

struct NonlinearData {
  Dataset train;
  Dataset test;      // noise-free responses
  Dataset publicSet;
};

// g(x) = (1-|x|)_+^5 (1+5|x|) + |x|^2 / 5
double nonlinearResponse(const Vector& x);

NonlinearData genNonlinear(const NonlinearScenario& scenario);

struct MarketScenario {
  std::vector<double> brandElasticities = {-1.5, -1.7, -2.01, -1.98, -1.9};
  std::vector<double> brandIntercepts = {4.0, 4.0, 4.0, 4.0, 4.0};
  double customerEffectStd = 0.2;            // delta ~ N(0, std^2) when drawn
  std::optional<Matrix> customerEffects;     // customers x brands, overrides
  Index weeks = 52;
  Index customers = 4;
  double priceLow = 150.0;                   // raw price range, logged on use
  double priceHigh = 1100.0;
  double noiseVariance = 0.5;
  std::uint64_t seed = 0;

  Index brandCount() const { return static_cast<Index>(brandElasticities.size()); }
  void validate() const;
};

// One row per (customer, brand, week) in that nesting order. Input is ln P,
// response is the adjusted ln S - mu_j - delta, i.e. beta_j ln P + noise.
struct MarketData {
  Dataset data;
  std::vector<int> brand;     // brand index per row
  Vector rawLogSales;         // unadjusted ln S
};

MarketData genPriceSale(const MarketScenario& scenario);

// ------------------------------------------------------------------ metrics

struct MarketingMetrics {
  std::vector<double> omuPercent;   // meaningful only where omuDefined
  std::vector<bool> omuDefined;
  std::vector<double> oprPercent;
  std::vector<bool> oprDefined;
  double mapdPercent = 0.0;
};

MarketingMetrics marketingMetrics(const std::vector<double>& trueBetas,
                                  const std::vector<double>& estimatedBetas);

// No-intercept least squares slope sum(x y) / sum(x^2).
double estimateElasticity(const Vector& inputs, const Vector& responses);

double evaluateMse(const Vector& predictions, const Vector& truth);

// (msePublicOnly - mseCombined) / msePublicOnly * 100; positive means the
// synthetic data helped.
double deltaMse(double msePublicOnly, double mseCombined);

// ------------------------------------------------------------ orchestration

// Flat named metrics; map keeps emission deterministic.
struct MetricTable {
  std::map<std::string, double> values;

  void set(const std::string& key, double v) { values[key] = v; }
};

struct AggregatedMetric {
  double mean = 0.0;
  double stddev = 0.0;
};

struct AggregatedMetrics {
  std::map<std::string, AggregatedMetric> values;
};

// Per-trial seeds are baseSeed + trial index; stddev is the sample standard
// deviation (0 for a single trial).
AggregatedMetrics runTrials(const std::function<MetricTable(std::uint64_t)>& trialFn,
                            int trials, std::uint64_t baseSeed, int threads = 1);

// --------------------------------------------------------------- presets

struct MetricRow {
  std::string preset;
  double alpha = 0.0;
  std::string model;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
};

struct PresetRequest {
  std::string preset;                 // nonlinear | price-sale | mismatch-...
  std::vector<double> alphas;         // empty -> preset default
  int trials = 0;                     // 0 -> preset default
  Stage1Sampler sampler;
  std::uint64_t seed = 0;
  int threads = 1;
  // nonlinear preset: which public models / training sets to evaluate
  std::vector<std::string> models = {"krr", "nwk"};
  std::vector<std::string> trainingSets = {"original", "public", "synthetic",
                                           "combined"};
};

std::vector<std::string> presetNames();

std::vector<MetricRow> runPreset(const PresetRequest& request);

}  // namespace synthforge

#endif
