#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "synthforge/csv.hpp"
#include "synthforge/experiments.hpp"
#include "synthforge/pipeline.hpp"
#include "synthforge/reports.hpp"

namespace {

using namespace synthforge;

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value plan file; [section] headers are allowed for grouping and
// ignored, '#' starts a comment. Command-line flags take precedence.
std::map<std::string, std::string> loadConfigMap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> map;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line is not key=value: '" + line + "'");
    }
    map[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return map;
}

double parseNumber(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "' has a non-numeric value '" + value + "'");
  }
}

std::vector<double> parseNumberList(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parseNumber(key, item));
  return out;
}

std::vector<std::string> parseStringList(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

struct SynthArgs {
  std::string in;
  std::string out = "synthforge-out";
  std::string config;
  std::vector<std::string> inputs;
  std::string response;
  double alpha = 0.0;
  double lidBudget = 0.0;
  double eta = 0.001;
  double rangeWidth = 0.0;
  std::string sampler = "sh";
  std::string kernel = "wendland";
  double kernelWidth = 1.0;
  std::vector<double> lambdaGrid;
  std::vector<double> bandwidthGrid;
  std::string scaling = "none";
  int bins = 50;
  std::uint64_t seed = 0;
  int threads = 0;

  CLI::Option* alphaOpt = nullptr;
  CLI::Option* budgetOpt = nullptr;
  CLI::Option* rangeWidthOpt = nullptr;
};

// config fills every option the command line left untouched
void applyConfig(SynthArgs& args, CLI::App* cmd,
                 const std::map<std::string, std::string>& cfg) {
  auto fresh = [&](const char* flag) { return cmd->get_option(flag)->count() == 0; };
  auto has = [&](const char* key) { return cfg.count(key) > 0; };
  auto get = [&](const char* key) { return cfg.at(key); };

  if (has("inputs") && fresh("--inputs")) args.inputs = parseStringList(get("inputs"));
  if (has("response") && fresh("--response")) args.response = get("response");
  if (has("eta") && fresh("--eta")) args.eta = parseNumber("eta", get("eta"));
  if (has("sampler") && fresh("--sampler")) args.sampler = get("sampler");
  if (has("kernel") && fresh("--kernel")) args.kernel = get("kernel");
  if (has("kernel-width") && fresh("--kernel-width")) {
    args.kernelWidth = parseNumber("kernel-width", get("kernel-width"));
  }
  if (has("lambda-grid") && fresh("--lambda-grid")) {
    args.lambdaGrid = parseNumberList("lambda-grid", get("lambda-grid"));
  }
  if (has("bandwidth-grid") && fresh("--bandwidth-grid")) {
    args.bandwidthGrid = parseNumberList("bandwidth-grid", get("bandwidth-grid"));
  }
  if (has("scaling") && fresh("--scaling")) args.scaling = get("scaling");
  if (has("bins") && fresh("--bins")) {
    args.bins = static_cast<int>(parseNumber("bins", get("bins")));
  }
  if (has("seed") && fresh("--seed")) {
    args.seed = static_cast<std::uint64_t>(parseNumber("seed", get("seed")));
  }
  if (has("threads") && fresh("--threads")) {
    args.threads = static_cast<int>(parseNumber("threads", get("threads")));
  }
  if (has("range-width") && args.rangeWidthOpt->count() == 0) {
    args.rangeWidth = parseNumber("range-width", get("range-width"));
    args.rangeWidthOpt->add_result(get("range-width"));  // mark as set
  }
}

SynthesisPlan buildPlan(const SynthArgs& args, bool alphaSet, bool budgetSet) {
  SynthesisPlan plan;
  plan.stage1.kind = parseSamplerKind(args.sampler);
  plan.kernel.kind = parseKernelKind(args.kernel);
  plan.kernel.width = args.kernelWidth;
  if (!args.lambdaGrid.empty()) plan.lambdaGrid.lambdaValues = args.lambdaGrid;
  if (!args.bandwidthGrid.empty()) plan.bandwidthGrid = args.bandwidthGrid;
  plan.scaling = parseScaling(args.scaling);
  plan.seed = args.seed;
  plan.fidelityBins = args.bins;
  if (alphaSet) plan.hybrid.alpha = args.alpha;
  if (budgetSet) plan.hybrid.lidBudgetPercent = args.lidBudget;
  plan.hybrid.eta = args.eta;
  if (args.rangeWidthOpt->count() > 0) plan.hybrid.rangeWidth = args.rangeWidth;
  return plan;
}

int runSynth(SynthArgs& args, CLI::App* cmd) {
  const auto start = std::chrono::steady_clock::now();

  SynthesisPlan plan;
  try {
    const bool flagAlpha = args.alphaOpt->count() > 0;
    const bool flagBudget = args.budgetOpt->count() > 0;
    bool alphaSet = flagAlpha;
    bool budgetSet = flagBudget;

    std::map<std::string, std::string> cfg;
    if (!args.config.empty()) cfg = loadConfigMap(args.config);
    applyConfig(args, cmd, cfg);
    if (!flagAlpha && !flagBudget) {
      // the mixing mode may come from the config when no flag chose one
      if (cfg.count("alpha") && cfg.count("lid-budget")) {
        throw UsageError("config sets both alpha and lid-budget; pick one");
      }
      if (cfg.count("alpha")) {
        args.alpha = parseNumber("alpha", cfg.at("alpha"));
        alphaSet = true;
      } else if (cfg.count("lid-budget")) {
        args.lidBudget = parseNumber("lid-budget", cfg.at("lid-budget"));
        budgetSet = true;
      }
    }
    if (!alphaSet && !budgetSet) {
      throw UsageError("one of --alpha or --lid-budget is required");
    }
    plan = buildPlan(args, alphaSet, budgetSet);
    plan.validate();
  } catch (const std::exception& e) {
    std::cerr << "synthforge synth: stage plan: " << e.what() << "\n";
    return kExitUsage;
  }

  IngestResult ingest;
  try {
    ColumnSelectors selectors{args.inputs, args.response, true};
    ingest = ingestCsv(args.in, selectors);
  } catch (const IngestError& e) {
    std::cerr << "synthforge synth: stage ingest: " << e.what() << "\n";
    return kExitUsage;
  }

  PipelineResult result;
  try {
    result = runPipeline(ingest.dataset, plan);
  } catch (const std::exception& e) {
    std::cerr << "synthforge synth: " << e.what() << "\n";
    return kExitNumeric;
  }

  try {
    const std::string csvPath = args.out + ".csv";
    const std::string privacyPath = args.out + ".privacy.json";
    const std::string fidelityPath = args.out + ".fidelity.json";
    const std::string manifestPath = args.out + ".manifest.json";

    writeCsv(csvPath, result.synthetic, ingest.layout);
    writeJsonFile(privacyPath, privacyToJson(result.privacy));
    writeJsonFile(fidelityPath, fidelityToJson(result.fidelity));

    ManifestInfo info;
    info.plan = &plan;
    info.result = &result;
    info.inputPath = args.in;
    info.inputDigest = digestFile(args.in);
    info.outputPaths = {csvPath, privacyPath, fidelityPath};
    info.wallClockMillis = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    writeJsonFile(manifestPath, buildManifest(info));

    std::cout << "alpha " << result.alphaUsed << ", lambda " << result.lambdaSelected
              << ", LID " << result.privacy.lidPercent << "%, avg TV "
              << result.fidelity.tvAverage << "\n"
              << "wrote " << csvPath << ", " << privacyPath << ", " << fidelityPath
              << ", " << manifestPath << "\n";
  } catch (const std::exception& e) {
    std::cerr << "synthforge synth: stage emit: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

int runAudit(const std::vector<std::string>& inputs, const std::string& originalPath,
             const std::string& syntheticPath, double eta, int bins,
             const std::string& out) {
  IngestResult original, synthetic;
  try {
    ColumnSelectors selectors{inputs, "", false};
    original = ingestCsv(originalPath, selectors);
    synthetic = ingestCsv(syntheticPath, selectors);
  } catch (const IngestError& e) {
    std::cerr << "synthforge audit: stage ingest: " << e.what() << "\n";
    return kExitUsage;
  }
  if (original.dataset.columnNames != synthetic.dataset.columnNames) {
    std::cerr << "synthforge audit: stage ingest: column schemas do not match\n";
    return kExitUsage;
  }
  if (original.dataset.rows() != synthetic.dataset.rows()) {
    std::cerr << "synthforge audit: stage ingest: row counts differ ("
              << original.dataset.rows() << " vs " << synthetic.dataset.rows()
              << "); LID requires aligned records\n";
    return kExitUsage;
  }

  try {
    const PrivacyReport privacy =
        computeLid(original.dataset.inputs, synthetic.dataset.inputs, eta);
    const FidelityReport fidelity =
        buildFidelityReport(original.dataset.inputs, synthetic.dataset.inputs, bins);
    writeJsonFile(out + ".privacy.json", privacyToJson(privacy));
    writeJsonFile(out + ".fidelity.json", fidelityToJson(fidelity));
    std::cout << "LID " << privacy.lidPercent << "% at eta " << eta << ", avg TV "
              << fidelity.tvAverage << "\n"
              << "wrote " << out << ".privacy.json, " << out << ".fidelity.json\n";
  } catch (const std::exception& e) {
    std::cerr << "synthforge audit: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

int runExperiment(const std::string& preset, const std::vector<double>& alphas,
                  int trials, const std::string& sampler,
                  const std::vector<std::string>& models, std::uint64_t seed,
                  int threads, const std::string& out) {
  const auto names = presetNames();
  if (std::find(names.begin(), names.end(), preset) == names.end()) {
    std::cerr << "synthforge experiment: unknown preset '" << preset << "'; presets:";
    for (const auto& name : names) std::cerr << " " << name;
    std::cerr << "\n";
    return kExitUsage;
  }

  PresetRequest request;
  request.preset = preset;
  request.alphas = alphas;
  request.trials = trials;
  request.sampler.kind = parseSamplerKind(sampler);
  request.seed = seed;
  request.threads = threads > 0 ? threads : defaultThreadCount();
  if (!models.empty()) request.models = models;

  std::vector<MetricRow> rows;
  try {
    rows = runPreset(request);
  } catch (const std::exception& e) {
    std::cerr << "synthforge experiment: " << e.what() << "\n";
    return kExitNumeric;
  }

  try {
    const std::string csvPath = out + ".csv";
    std::ofstream csv(csvPath, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + csvPath);
    csv << "preset,alpha,model,metric,mean,std\n";
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& row : rows) {
      csv << row.preset << "," << formatDouble(row.alpha) << "," << row.model << ","
          << row.metric << "," << formatDouble(row.mean) << ","
          << formatDouble(row.stddev) << "\n";
      jrows.push_back({{"preset", row.preset},
                       {"alpha", row.alpha},
                       {"model", row.model},
                       {"metric", row.metric},
                       {"mean", row.mean},
                       {"std", row.stddev}});
    }
    csv.close();
    writeJsonFile(out + ".json", jrows);
    std::cout << rows.size() << " metric rows -> " << csvPath << ", " << out
              << ".json\n";
  } catch (const std::exception& e) {
    std::cerr << "synthforge experiment: stage emit: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthforge: two-stage privacy-preserving synthetic data generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", synthforge::kToolVersion);

  // ---- synth
  SynthArgs synthArgs;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--in", synthArgs.in, "input CSV (header required)")->required();
  synth->add_option("--out", synthArgs.out, "output path prefix");
  synth->add_option("--config", synthArgs.config,
                    "key=value plan file; flags take precedence");
  synth->add_option("--inputs", synthArgs.inputs, "input column names or indices")
      ->delimiter(',');
  synth->add_option("--response", synthArgs.response,
                    "response column (default: last column)");
  synthArgs.alphaOpt =
      synth->add_option("--alpha", synthArgs.alpha, "hybrid mixing weight in [0,1]");
  synthArgs.budgetOpt = synth->add_option("--lid-budget", synthArgs.lidBudget,
                                          "LID budget percent in (0,100]");
  synthArgs.alphaOpt->excludes(synthArgs.budgetOpt);
  synthArgs.budgetOpt->excludes(synthArgs.alphaOpt);
  synth->add_option("--eta", synthArgs.eta, "attack tolerance eta");
  synthArgs.rangeWidthOpt = synth->add_option(
      "--range-width", synthArgs.rangeWidth, "uniform range width b-a for the LID bound");
  synth->add_option("--sampler", synthArgs.sampler, "stage-1 sampler")
      ->check(CLI::IsMember({"sh", "random", "weibull", "cauchy"}));
  synth->add_option("--kernel", synthArgs.kernel, "KRR kernel")
      ->check(CLI::IsMember({"wendland", "gaussian"}));
  synth->add_option("--kernel-width", synthArgs.kernelWidth, "Gaussian kernel width");
  synth->add_option("--lambda-grid", synthArgs.lambdaGrid, "KRR regularization CV grid")
      ->delimiter(',');
  synth->add_option("--bandwidth-grid", synthArgs.bandwidthGrid, "KDE bandwidth CV grid")
      ->delimiter(',');
  synth->add_option("--scaling", synthArgs.scaling, "input scaling")
      ->check(CLI::IsMember({"none", "minmax"}));
  synth->add_option("--bins", synthArgs.bins, "histogram bins for the TV norm");
  synth->add_option("--seed", synthArgs.seed, "RNG seed")->envname("SYNTHFORGE_SEED");
  synth->add_option("--threads", synthArgs.threads, "worker thread cap");

  // ---- audit
  std::string auditOriginal, auditSynthetic, auditOut = "synthforge-out";
  std::vector<std::string> auditInputs;
  double auditEta = 0.001;
  int auditBins = 50;
  CLI::App* audit = app.add_subcommand("audit", "privacy/fidelity report for two CSVs");
  audit->add_option("original", auditOriginal, "original CSV")->required();
  audit->add_option("synthetic", auditSynthetic, "synthetic CSV")->required();
  audit->add_option("--inputs", auditInputs, "columns to audit (default: all)")
      ->delimiter(',');
  audit->add_option("--eta", auditEta, "attack tolerance eta");
  audit->add_option("--bins", auditBins, "histogram bins for the TV norm");
  audit->add_option("--out", auditOut, "output path prefix");

  // ---- experiment
  std::string preset, expSampler = "sh", expOut = "synthforge-out";
  std::vector<double> alphas;
  std::vector<std::string> expModels;
  int trials = 0, expThreads = 0;
  std::uint64_t expSeed = 0;
  CLI::App* experiment = app.add_subcommand("experiment", "run a named experiment preset");
  experiment->add_option("preset", preset, "preset name")->required();
  experiment->add_option("--alphas,--alpha", alphas, "hybrid weights to sweep")
      ->delimiter(',');
  experiment->add_option("--trials", trials, "number of trials");
  experiment->add_option("--sampler", expSampler, "stage-1 sampler")
      ->check(CLI::IsMember({"sh", "random", "weibull", "cauchy"}));
  experiment->add_option("--models", expModels, "public models to evaluate")
      ->delimiter(',');
  experiment->add_option("--seed", expSeed, "RNG seed")->envname("SYNTHFORGE_SEED");
  experiment->add_option("--threads", expThreads, "worker thread cap");
  experiment->add_option("--out", expOut, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "synthforge: " << e.what() << "\n";
    return kExitUsage;
  }

  if (synth->parsed()) return runSynth(synthArgs, synth);
  if (audit->parsed()) {
    return runAudit(auditInputs, auditOriginal, auditSynthetic, auditEta, auditBins,
                    auditOut);
  }
  if (experiment->parsed()) {
    return runExperiment(preset, alphas, trials, expSampler, expModels, expSeed,
                         expThreads, expOut);
  }
  return 0;
}
