#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tabguard/tabguard.h>

namespace {

int exit_code_for(tabguard_status status) {
  if (status == TABGUARD_OK) return 0;
  std::fprintf(stderr, "error: %s\n", tabguard_last_error());
  switch (status) {
    case TABGUARD_ERR_CONFIG:
      return 2;
    case TABGUARD_ERR_DATA:
      return 3;
    case TABGUARD_ERR_NUMERIC:
      return 4;
    case TABGUARD_ERR_CALIBRATION:
      return 5;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabguard: privacy-preserving tabular classification experiments"};
  app.set_version_flag("--version", std::string("tabguard ") + tabguard_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string model_kind;
  std::vector<std::uint64_t> seeds;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (INI) or a manifest JSON");
    cmd->add_option("--seed", seeds, "override run seeds (repeatable)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", threads, "worker threads");
    return cmd;
  };
  auto add_model_kind = [&](CLI::App* cmd) {
    cmd->add_option("--model-kind", model_kind, "restrict to one model kind")
        ->check(CLI::IsMember({"base", "adv", "adv_per"}));
    return cmd;
  };

  CLI::App* gen = add_common(
      app.add_subcommand("gen-data", "generate synthetic TRAIN/TEST/holdout CSV files"));
  CLI::App* train = add_model_kind(add_common(
      app.add_subcommand("train", "train models and calibrate thresholds by 10-fold CV")));
  CLI::App* attack = add_common(
      app.add_subcommand("attack", "run property-inference attackers against saved models"));
  CLI::App* crosstest = add_common(
      app.add_subcommand("crosstest", "demographic cross-testing of Base vs ADV"));
  CLI::App* external = add_model_kind(add_common(
      app.add_subcommand("external", "evaluate saved models on imbalanced holdouts")));
  CLI::App* report =
      add_common(app.add_subcommand("report", "print the tables for all completed commands"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  tabguard_run_options opts;
  tabguard_run_options_defaults(&opts);
  if (!config_path.empty()) opts.config_path = config_path.c_str();
  if (!out_dir.empty()) opts.out_dir = out_dir.c_str();
  if (!seeds.empty()) {
    opts.seeds = seeds.data();
    opts.n_seeds = seeds.size();
  }
  if (!model_kind.empty()) opts.model_kind = model_kind.c_str();
  if (threads > 0) opts.threads = threads;

  if (gen->parsed()) return exit_code_for(tabguard_cmd_gen_data(&opts));
  if (train->parsed()) return exit_code_for(tabguard_cmd_train(&opts));
  if (attack->parsed()) return exit_code_for(tabguard_cmd_attack(&opts));
  if (crosstest->parsed()) return exit_code_for(tabguard_cmd_crosstest(&opts));
  if (external->parsed()) return exit_code_for(tabguard_cmd_external(&opts));
  if (report->parsed()) {
    char* text = nullptr;
    const tabguard_status status = tabguard_cmd_report(&opts, &text);
    if (status == TABGUARD_OK) {
      std::fputs(text, stdout);
      tabguard_string_free(text);
    }
    return exit_code_for(status);
  }
  return 1;
}
