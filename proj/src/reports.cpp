#include "synthforge/reports.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace synthforge {

using nlohmann::json;

namespace {

json deltaToJson(const RelativeDelta& d) {
  return json{{"value", d.value}, {"relative", d.isRelative}};
}

}  // namespace

json privacyToJson(const PrivacyReport& report) {
  json j;
  j["schemaVersion"] = kReportSchemaVersion;
  j["lidPercent"] = report.lidPercent;
  j["eta"] = report.eta;
  j["perDimensionBreachCounts"] = report.perDimensionBreachCounts;
  if (report.theoreticalBoundPercent) {
    j["theoreticalBoundPercent"] = *report.theoreticalBoundPercent;
  }
  return j;
}

json fidelityToJson(const FidelityReport& report) {
  json j;
  j["schemaVersion"] = kReportSchemaVersion;
  j["binCount"] = report.binCount;
  j["tvPerColumn"] = report.tvPerColumn;
  j["tvAverage"] = report.tvAverage;
  auto deltas = [](const std::vector<RelativeDelta>& v) {
    json arr = json::array();
    for (const auto& d : v) arr.push_back(deltaToJson(d));
    return arr;
  };
  j["meanDeltas"] = deltas(report.meanDeltas);
  j["varianceDeltas"] = deltas(report.varianceDeltas);
  json cov = json::array();
  for (const auto& row : report.covarianceDeltas) cov.push_back(deltas(row));
  j["covarianceDeltas"] = cov;
  return j;
}

json planToJson(const SynthesisPlan& plan) {
  json j;
  j["sampler"] = plan.stage1.name();
  if (plan.stage1.kind == Stage1Sampler::Kind::RanWeibull) {
    j["weibullScale"] = plan.stage1.weibullScale;
    j["weibullShape"] = plan.stage1.weibullShape;
  }
  if (plan.stage1.kind == Stage1Sampler::Kind::RanCauchy) {
    j["cauchyLocation"] = plan.stage1.cauchyLocation;
    j["cauchyScale"] = plan.stage1.cauchyScale;
  }
  if (plan.hybrid.alpha) j["alpha"] = *plan.hybrid.alpha;
  if (plan.hybrid.lidBudgetPercent) j["lidBudgetPercent"] = *plan.hybrid.lidBudgetPercent;
  j["eta"] = plan.hybrid.eta;
  if (plan.hybrid.rangeWidth) j["rangeWidth"] = *plan.hybrid.rangeWidth;
  j["kernel"] = plan.kernel.name();
  if (plan.kernel.kind == Kernel::Kind::Gaussian) j["kernelWidth"] = plan.kernel.width;
  j["lambdaGrid"] = plan.lambdaGrid.lambdaValues;
  j["cvFolds"] = plan.lambdaGrid.folds;
  j["bandwidthGrid"] = plan.bandwidthGrid;
  j["seed"] = plan.seed;
  j["scaling"] = plan.scaling == Scaling::MinMax ? "minmax" : "none";
  j["fidelityBins"] = plan.fidelityBins;
  j["assumeUniformBound"] = plan.assumeUniformBound;
  return j;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string digestFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("digestFile: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return hex;
}

json buildManifest(const ManifestInfo& info) {
  json j;
  j["schemaVersion"] = kReportSchemaVersion;
  j["toolVersion"] = kToolVersion;
  if (info.plan) j["plan"] = planToJson(*info.plan);
  if (info.result) {
    j["alphaUsed"] = info.result->alphaUsed;
    j["lambdaSelected"] = info.result->lambdaSelected;
    j["bandwidths"] = info.result->bandwidths;
  }
  j["input"] = {{"path", info.inputPath}, {"digest", info.inputDigest}};
  j["outputs"] = info.outputPaths;
  json stages = json::object();
  if (info.result) {
    for (const auto& [name, ms] : info.result->stageMillis) stages[name] = ms;
  }
  j["timings"] = {{"wallClockMillis", info.wallClockMillis}, {"stages", stages}};
  return j;
}

void writeJsonFile(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("writeJsonFile: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace synthforge
