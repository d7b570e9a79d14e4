#include "synthforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace synthforge {

Scaling parseScaling(const std::string& name) {
  if (name == "none") return Scaling::None;
  if (name == "minmax") return Scaling::MinMax;
  throw std::invalid_argument("unknown scaling '" + name + "' (expected none|minmax)");
}

void SynthesisPlan::validate() const {
  stage1.validate();
  hybrid.validate();
  kernel.validate();
  lambdaGrid.validate();
  if (bandwidthGrid.empty()) {
    throw std::invalid_argument("SynthesisPlan: bandwidth grid is empty");
  }
  if (fidelityBins < 2) {
    throw std::invalid_argument("SynthesisPlan: fidelityBins must be >= 2");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

struct StageTimer {
  std::vector<std::pair<std::string, double>>& sink;
  const char* name;
  Clock::time_point start = Clock::now();

  StageTimer(std::vector<std::pair<std::string, double>>& s, const char* n)
      : sink(s), name(n) {}
  ~StageTimer() {
    sink.emplace_back(name,
                      std::chrono::duration<double, std::milli>(Clock::now() - start)
                          .count());
  }
};

[[noreturn]] void rethrowWithStage(const char* stage) {
  try {
    throw;
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("stage ") + stage + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("stage ") + stage + ": " + e.what());
  }
}

}  // namespace

PipelineResult runPipeline(const Dataset& data, const SynthesisPlan& plan) {
  PipelineResult result;

  try {
    data.validate();
    plan.validate();
    if (!data.hasResponse()) {
      throw std::invalid_argument("pipeline input needs a response column");
    }
  } catch (...) {
    rethrowWithStage("validate");
  }

  const Index n = data.rows();
  const Index d = data.cols();

  // optional min-max scaling; synthesis runs in the scaled space, audits and
  // emitted data in raw units
  Vector scaleLo(d), scaleSpan(d);
  Dataset work = data;
  if (plan.scaling == Scaling::MinMax) {
    try {
      for (Index j = 0; j < d; ++j) {
        scaleLo(j) = data.inputs.col(j).minCoeff();
        const double hi = data.inputs.col(j).maxCoeff();
        if (!(hi > scaleLo(j))) {
          throw std::invalid_argument("min-max scaling hit a constant column");
        }
        scaleSpan(j) = hi - scaleLo(j);
        work.inputs.col(j) = (data.inputs.col(j).array() - scaleLo(j)) / scaleSpan(j);
      }
    } catch (...) {
      rethrowWithStage("scaling");
    }
  }

  // stage 1: marginals + pure synthetic sample
  Matrix pureSynthetic;
  std::vector<MarginalModel> models;
  try {
    StageTimer timer(result.stageMillis, "stage1");
    if (plan.stage1.kind == Stage1Sampler::Kind::SH) {
      models.reserve(d);
      result.bandwidths.reserve(d);
      for (Index j = 0; j < d; ++j) {
        ColumnSample column{work.inputs.col(j), static_cast<int>(j)};
        const double bw = selectBandwidth(column, plan.bandwidthGrid, 5);
        result.bandwidths.push_back(bw);
        models.push_back(fitKde(column, bw));
      }
      pureSynthetic = synthesize(work, models, deriveSeed(plan.seed, seedtag::stage1));
    } else {
      pureSynthetic =
          baselineSample(plan.stage1, n, d, deriveSeed(plan.seed, seedtag::stage1));
    }
  } catch (...) {
    rethrowWithStage("stage1");
  }

  // hybrid: pairing then convex mix
  double alpha = 0.0;
  double boundWidth = 0.0;
  Matrix mixed;
  try {
    StageTimer timer(result.stageMillis, "hybrid");
    const std::vector<Index> perm = nearestPairing(work.inputs, pureSynthetic);
    const Matrix paired = applyPairing(pureSynthetic, perm);

    if (plan.hybrid.alpha) {
      alpha = *plan.hybrid.alpha;
    } else {
      if (plan.hybrid.rangeWidth) {
        boundWidth = *plan.hybrid.rangeWidth;
      } else {
        // narrowest observed raw-unit column range keeps the bound conservative
        boundWidth = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < d; ++j) {
          boundWidth = std::min(boundWidth, data.inputs.col(j).maxCoeff() -
                                                data.inputs.col(j).minCoeff());
        }
        if (!(boundWidth > 0.0)) {
          throw std::invalid_argument("cannot infer a positive range width");
        }
        if (!plan.assumeUniformBound) {
          std::cerr << "synthforge: LID budget solved with observed range width "
                    << boundWidth
                    << "; the closed-form bound is heuristic for non-uniform data\n";
        }
      }
      alpha = solveAlphaForBudget(*plan.hybrid.lidBudgetPercent, plan.hybrid.eta, d,
                                  boundWidth);
    }
    mixed = mix(work.inputs, paired, alpha);
  } catch (...) {
    rethrowWithStage("hybrid");
  }
  result.alphaUsed = alpha;

  // stage 2: KRR response reconstruction from the original data
  Vector syntheticResponse;
  try {
    StageTimer timer(result.stageMillis, "regression");
    result.lambdaSelected =
        selectLambda(work, plan.lambdaGrid, plan.kernel, deriveSeed(plan.seed, seedtag::cvFolds));
    const KrrModel model = fitKrr(work, result.lambdaSelected, plan.kernel);
    syntheticResponse = predictKrr(model, mixed);
  } catch (...) {
    rethrowWithStage("regression");
  }

  // back to raw units
  Matrix outputInputs = mixed;
  if (plan.scaling == Scaling::MinMax) {
    for (Index j = 0; j < d; ++j) {
      outputInputs.col(j) = scaleLo(j) + mixed.col(j).array() * scaleSpan(j);
    }
  }

  result.synthetic.inputs = std::move(outputInputs);
  result.synthetic.response = std::move(syntheticResponse);
  result.synthetic.columnNames = data.columnNames;

  try {
    StageTimer timer(result.stageMillis, "audit");
    result.privacy =
        computeLid(data.inputs, result.synthetic.inputs, plan.hybrid.eta);
    if (plan.hybrid.lidBudgetPercent || plan.assumeUniformBound) {
      double width = boundWidth;
      if (!(width > 0.0)) {
        if (plan.hybrid.rangeWidth) {
          width = *plan.hybrid.rangeWidth;
        } else {
          width = std::numeric_limits<double>::infinity();
          for (Index j = 0; j < d; ++j) {
            width = std::min(width, data.inputs.col(j).maxCoeff() -
                                        data.inputs.col(j).minCoeff());
          }
        }
      }
      if (alpha < 1.0 &&
          2.0 * plan.hybrid.eta / (width * (1.0 - alpha)) < 1.0) {
        result.privacy.theoreticalBoundPercent =
            lidBound(alpha, plan.hybrid.eta, d, width);
      }
    }
    result.fidelity =
        buildFidelityReport(data.inputs, result.synthetic.inputs, plan.fidelityBins);
  } catch (...) {
    rethrowWithStage("audit");
  }

  return result;
}

}  // namespace synthforge
