#ifndef SYNTHFORGE_REPORTS_HPP
#define SYNTHFORGE_REPORTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "synthforge/audit.hpp"
#include "synthforge/pipeline.hpp"

namespace synthforge {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json privacyToJson(const PrivacyReport& report);
nlohmann::json fidelityToJson(const FidelityReport& report);
nlohmann::json planToJson(const SynthesisPlan& plan);

// FNV-1a 64 over the raw bytes, rendered as 16 hex digits; stable across runs
// on identical input bytes.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string digestFile(const std::string& path);

struct ManifestInfo {
  const SynthesisPlan* plan = nullptr;
  const PipelineResult* result = nullptr;
  std::string inputPath;
  std::string inputDigest;
  std::vector<std::string> outputPaths;
  double wallClockMillis = 0.0;
};

nlohmann::json buildManifest(const ManifestInfo& info);

void writeJsonFile(const std::string& path, const nlohmann::json& j);

}  // namespace synthforge

#endif
