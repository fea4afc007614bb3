#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tabguard/tabguard.h"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "tabguard_capi_tests";
  fs::create_directories(dir);
  return dir;
}

tabguard_synthetic_spec small_spec(std::uint64_t seed) {
  tabguard_synthetic_spec spec;
  tabguard_synthetic_spec_defaults(&spec);
  spec.n_rows = 240;
  spec.label_signal = 1.5;
  spec.seed = seed;
  return spec;
}

tabguard_train_options small_train_options() {
  tabguard_train_options opts;
  tabguard_train_options_defaults(&opts);
  opts.hidden_dim = 8;
  opts.disc_hidden_dim = 8;
  opts.epochs = 2;
  opts.lr = 0.005;
  opts.folds = 3;
  opts.seed = 9;
  return opts;
}

}  // namespace

TEST_CASE("version and defaults are populated") {
  const char* version = tabguard_version();
  REQUIRE(version != nullptr);
  CHECK(std::string(version).find('.') != std::string::npos);

  tabguard_synthetic_spec spec;
  tabguard_synthetic_spec_defaults(&spec);
  CHECK(spec.n_rows == 10000);
  CHECK(spec.prevalence == 0.5);
  CHECK(spec.attr_priors[0] == 0.53);
  CHECK(spec.attr_priors[1] == 0.54);
  CHECK(spec.attr_priors[2] == 0.68);
  CHECK(spec.label_signal == 0.75);

  tabguard_train_options opts;
  tabguard_train_options_defaults(&opts);
  CHECK(opts.kind == TABGUARD_MODEL_BASE);
  CHECK(opts.lr == 0.0008);
  CHECK(opts.batch_size == 16);
  CHECK(opts.hidden_dim == 150);
  CHECK(opts.disc_hidden_dim == 300);
  CHECK(opts.dropout == 0.5);
  CHECK(opts.epochs == 15);
  CHECK(opts.lambda_ == 2.0);
  CHECK(opts.epsilon == 0.05);
  CHECK(opts.alpha == 0.5);
  CHECK(opts.folds == 10);
  CHECK(opts.recall_lo == 0.73);
  CHECK(opts.recall_hi == 0.87);

  CHECK(tabguard_dataset_feature_count() == 30);
}

TEST_CASE("datasets generate, save, and load through the C boundary") {
  tabguard_synthetic_spec spec = small_spec(3);
  tabguard_dataset* data = nullptr;
  REQUIRE(tabguard_dataset_generate(&spec, &data) == TABGUARD_OK);
  REQUIRE(data != nullptr);
  CHECK(tabguard_dataset_rows(data) == 240);

  const std::string csv = (temp_dir() / "capi_data.csv").string();
  REQUIRE(tabguard_dataset_save_csv(data, csv.c_str()) == TABGUARD_OK);

  tabguard_dataset* loaded = nullptr;
  REQUIRE(tabguard_dataset_load_csv(csv.c_str(), &loaded) == TABGUARD_OK);
  CHECK(tabguard_dataset_rows(loaded) == 240);

  tabguard_dataset_free(data);
  tabguard_dataset_free(loaded);
}

TEST_CASE("NULL arguments and bad paths map to the right status codes") {
  tabguard_dataset* out = nullptr;
  CHECK(tabguard_dataset_generate(nullptr, &out) == TABGUARD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tabguard_last_error()).find("NULL") != std::string::npos);

  CHECK(tabguard_dataset_load_csv((temp_dir() / "missing.csv").string().c_str(), &out) ==
        TABGUARD_ERR_DATA);
  CHECK(std::string(tabguard_last_error()).empty() == false);

  tabguard_model* model = nullptr;
  CHECK(tabguard_model_load((temp_dir() / "missing.tgmd").string().c_str(), &model) ==
        TABGUARD_ERR_DATA);
  double threshold = 0.0;
  CHECK(tabguard_model_threshold(nullptr, &threshold) == TABGUARD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("train, predict, encode, and a model round trip") {
  tabguard_synthetic_spec spec = small_spec(4);
  tabguard_dataset* data = nullptr;
  REQUIRE(tabguard_dataset_generate(&spec, &data) == TABGUARD_OK);

  tabguard_train_options opts = small_train_options();
  tabguard_model* model = nullptr;
  REQUIRE(tabguard_model_train(data, &opts, &model) == TABGUARD_OK);
  REQUIRE(model != nullptr);

  tabguard_model_kind kind;
  REQUIRE(tabguard_model_kind_of(model, &kind) == TABGUARD_OK);
  CHECK(kind == TABGUARD_MODEL_BASE);

  double threshold = -1.0;
  REQUIRE(tabguard_model_threshold(model, &threshold) == TABGUARD_OK);
  CHECK(threshold >= 0.0);
  CHECK(threshold <= 1.0);

  size_t dim = 0;
  REQUIRE(tabguard_model_encoder_dim(model, &dim) == TABGUARD_OK);
  CHECK(dim == 8);

  const size_t rows = tabguard_dataset_rows(data);
  std::vector<double> probs(rows, -1.0);
  REQUIRE(tabguard_model_predict(model, data, probs.data(), probs.size()) == TABGUARD_OK);
  for (double p : probs) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  CHECK(tabguard_model_predict(model, data, probs.data(), 3) == TABGUARD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tabguard_last_error()).find("buffer") != std::string::npos);

  std::vector<double> reps(rows * dim, 0.0);
  REQUIRE(tabguard_model_encode(model, data, reps.data(), reps.size()) == TABGUARD_OK);
  for (double v : reps) CHECK(std::isfinite(v));

  const std::string path = (temp_dir() / "capi_model.tgmd").string();
  REQUIRE(tabguard_model_save(model, path.c_str()) == TABGUARD_OK);
  tabguard_model* loaded = nullptr;
  REQUIRE(tabguard_model_load(path.c_str(), &loaded) == TABGUARD_OK);

  double threshold2 = -1.0;
  REQUIRE(tabguard_model_threshold(loaded, &threshold2) == TABGUARD_OK);
  CHECK(threshold2 == threshold);
  std::vector<double> probs2(rows, -2.0);
  REQUIRE(tabguard_model_predict(loaded, data, probs2.data(), probs2.size()) == TABGUARD_OK);
  CHECK(probs == probs2);

  tabguard_model_free(model);
  tabguard_model_free(loaded);
  tabguard_dataset_free(data);
}

TEST_CASE("experiment commands run end to end from a config file") {
  const fs::path dir = temp_dir() / "capi_run";
  fs::remove_all(dir);
  const fs::path ini = temp_dir() / "capi_run.ini";
  std::ofstream(ini) << "[data]\n"
                        "n_rows = 240\n"
                        "test_fraction = 0.25\n"
                        "label_signal = 1.5\n"
                        "[hyperparams]\n"
                        "epochs = 1\n"
                        "hidden_dim = 8\n"
                        "disc_hidden_dim = 8\n"
                        "[calibration]\n"
                        "folds = 3\n"
                        "[run]\n"
                        "seeds = 5\n"
                        "[external]\n"
                        "holdout_rows = 150\n"
                        "holdout_prevalences = 0.2\n";

  const std::string ini_str = ini.string();
  const std::string dir_str = dir.string();
  tabguard_run_options opts;
  tabguard_run_options_defaults(&opts);
  opts.config_path = ini_str.c_str();
  opts.out_dir = dir_str.c_str();
  opts.model_kind = "base";

  REQUIRE(tabguard_cmd_gen_data(&opts) == TABGUARD_OK);
  CHECK(fs::exists(dir / "data" / "train.csv"));
  CHECK(fs::exists(dir / "data" / "test.csv"));
  CHECK(fs::exists(dir / "gen_data_manifest.json"));

  REQUIRE(tabguard_cmd_train(&opts) == TABGUARD_OK);
  CHECK(fs::exists(dir / "train_manifest.json"));
  CHECK(fs::exists(dir / "models" / "base_seed5.tgmd"));

  char* text = nullptr;
  REQUIRE(tabguard_cmd_report(&opts, &text) == TABGUARD_OK);
  REQUIRE(text != nullptr);
  const std::string report(text);
  tabguard_string_free(text);
  CHECK(report.find("train.csv") != std::string::npos);
  CHECK(report.find("Base") != std::string::npos);
}

TEST_CASE("commands surface config and data errors as status codes") {
  const fs::path bad_ini = temp_dir() / "bad.ini";
  std::ofstream(bad_ini) << "[data]\nshoe_size = 9\n";
  const std::string bad_str = bad_ini.string();
  tabguard_run_options opts;
  tabguard_run_options_defaults(&opts);
  opts.config_path = bad_str.c_str();
  CHECK(tabguard_cmd_gen_data(&opts) == TABGUARD_ERR_CONFIG);

  const fs::path empty_dir = temp_dir() / "no_data_here";
  fs::create_directories(empty_dir);
  const std::string empty_str = empty_dir.string();
  tabguard_run_options train_opts;
  tabguard_run_options_defaults(&train_opts);
  train_opts.out_dir = empty_str.c_str();
  train_opts.model_kind = "base";
  CHECK(tabguard_cmd_train(&train_opts) == TABGUARD_ERR_DATA);
  CHECK(std::string(tabguard_last_error()).find("gen-data") != std::string::npos);
}
