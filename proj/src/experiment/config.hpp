#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/models.hpp"
#include "core/pipeline.hpp"
#include "core/synthetic.hpp"

namespace tabguard {

struct DataConfig {
  std::string source = "synthetic";  // "synthetic" or "csv"
  std::string train_csv;
  std::string test_csv;
  SyntheticSpec synthetic{};
  double test_fraction = 0.2;
};

struct RunConfig {
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int threads = 1;
  std::string out_dir = "runs";
};

struct ExternalConfig {
  std::vector<double> holdout_prevalences = {0.0148, 0.1113, 0.052};
  std::size_t holdout_rows = 3000;
};

// Every key has a default, so an empty file is a complete configuration.
struct ExperimentConfig {
  DataConfig data{};
  // Kinds the train command covers, in report order. "kind = all" selects
  // base, adv_per, adv; a single name narrows the run to that model.
  std::vector<ModelKind> train_kinds = {ModelKind::base, ModelKind::adv_per, ModelKind::adv};
  Hyperparams hp{};
  std::size_t adv_per_epochs = 30;
  double lambda = 2.0;
  FgsmConfig fgsm{};
  CvOptions cv{};
  RunConfig run{};
  ExternalConfig external{};
};

void validate_config(const ExperimentConfig& cfg);

// Sectioned key = value text; '#' and ';' start comments. Unknown sections
// or keys are config errors, as are values that fail to parse.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

// Canonical section -> key -> value form; stable under round-trips. The run
// manifest embeds this map, so a run is reproducible from the manifest alone.
ConfigMap config_to_map(const ExperimentConfig& cfg);
ExperimentConfig config_from_map(const ConfigMap& map);
std::string render_config(const ExperimentConfig& cfg);

// The full training recipe for one model kind under this config.
TrainSpec train_spec(const ExperimentConfig& cfg, ModelKind kind);

}  // namespace tabguard
