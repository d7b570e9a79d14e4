#ifndef SYNTHFORGE_PIPELINE_HPP
#define SYNTHFORGE_PIPELINE_HPP

#include <string>
#include <utility>
#include <vector>

#include "synthforge/audit.hpp"
#include "synthforge/dataset.hpp"
#include "synthforge/hybrid.hpp"
#include "synthforge/lhs.hpp"
#include "synthforge/regression.hpp"

namespace synthforge {

enum class Scaling { None, MinMax };

Scaling parseScaling(const std::string& name);

// Full pipeline configuration; everything an invocation needs besides the
// data itself. Deterministic given the seed.
struct SynthesisPlan {
  Stage1Sampler stage1;
  HybridConfig hybrid;
  Kernel kernel;
  CvGrid lambdaGrid = defaultLambdaGrid();
  std::vector<double> bandwidthGrid = defaultBandwidthGrid();
  std::uint64_t seed = 0;
  Scaling scaling = Scaling::None;
  int fidelityBins = 50;
  // caller asserts uniform marginals, enabling the theoretical bound in the
  // privacy report even when alpha is given directly
  bool assumeUniformBound = false;

  void validate() const;
};

struct PipelineResult {
  Dataset synthetic;
  PrivacyReport privacy;
  FidelityReport fidelity;
  double alphaUsed = 0.0;
  double lambdaSelected = 0.0;
  std::vector<double> bandwidths;               // per column; empty unless SH
  std::vector<std::pair<std::string, double>> stageMillis;
};

// Fit marginals, stage-1 synthesis, nearest pairing, mix, KRR response
// reconstruction, then privacy and fidelity audits against the original.
PipelineResult runPipeline(const Dataset& data, const SynthesisPlan& plan);

}  // namespace synthforge

#endif
