#pragma once

#include <string>

#include <json.hpp>

#include "experiment/config.hpp"

namespace tabguard {

// Filesystem layout of one output directory. Everything a command writes
// lives under here; manifests sit at the root so reruns can find them.
struct OutPaths {
  std::string root;

  std::string data_dir() const { return root + "/data"; }
  std::string models_dir() const { return root + "/models"; }
  std::string reports_dir() const { return root + "/reports"; }

  std::string train_csv() const { return data_dir() + "/train.csv"; }
  std::string test_csv() const { return data_dir() + "/test.csv"; }
  std::string holdout_csv(std::size_t i) const;
  std::string config_echo() const { return data_dir() + "/config_echo.ini"; }

  std::string model_file(ModelKind kind, std::uint64_t seed) const;

  std::string manifest(const std::string& command) const {
    return root + "/" + command + "_manifest.json";
  }
  std::string report_csv(const std::string& name) const {
    return reports_dir() + "/" + name + ".csv";
  }
  std::string report_txt(const std::string& name) const {
    return reports_dir() + "/" + name + ".txt";
  }
};

// Single-letter holdout tags: a, b, c, ...
std::string holdout_name(std::size_t i);

struct CommandResult {
  nlohmann::json manifest;
  std::string manifest_path;
};

CommandResult cmd_gen_data(const ExperimentConfig& cfg);
CommandResult cmd_train(const ExperimentConfig& cfg);
CommandResult cmd_attack(const ExperimentConfig& cfg);
CommandResult cmd_crosstest(const ExperimentConfig& cfg);
CommandResult cmd_external(const ExperimentConfig& cfg);

// Renders the human-readable tables for every manifest present in the
// output directory.
std::string cmd_report(const ExperimentConfig& cfg);

// Loads the config snapshot embedded in a manifest, so any command can be
// rerun from the manifest alone.
ExperimentConfig config_from_manifest_file(const std::string& path);

// Either an INI config or a manifest JSON (detected by a leading '{').
ExperimentConfig load_config_any(const std::string& path);

nlohmann::json metrics_to_json(const MetricSet& m);
MetricSet metrics_from_json(const nlohmann::json& j);

}  // namespace tabguard
