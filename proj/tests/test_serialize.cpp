#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/model_io.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace tabguard;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tabguard_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

Matrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  Matrix m(n, d);
  Rng rng(seed);
  for (double& v : m.flat()) v = rng.normal();
  return m;
}

std::vector<double> random_labels(std::size_t n, std::uint64_t seed) {
  std::vector<double> y(n);
  Rng rng(seed);
  for (double& v : y) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return y;
}

Hyperparams tiny_hp() {
  Hyperparams hp;
  hp.lr = 0.01;
  hp.batch_size = 8;
  hp.hidden_dim = 12;
  hp.disc_hidden_dim = 10;
  hp.dropout_rate = 0.5;
  hp.epochs = 2;
  return hp;
}

TrainedModel small_adv_model() {
  const std::size_t n = 96, d = 7;
  Matrix x = random_matrix(n, d, 41);
  std::vector<double> y = random_labels(n, 42);
  Matrix z(n, kProtectedCount);
  Rng rng(43);
  for (double& v : z.flat()) v = rng.bernoulli(0.5) ? 1.0 : 0.0;

  TrainedModel model = train_adv(x, y, z, tiny_hp(), 2.0, 44);
  model.stats.mean.assign(d, 0.25);
  model.stats.stddev.assign(d, 1.5);
  model.stats.impute.assign(d, 0.1);
  model.stats.mean[2] = -3.0;
  model.stats.impute[4] = 9.0;
  model.calibrated = true;
  model.threshold = 0.55;
  return model;
}

void check_models_identical(const TrainedModel& a, const TrainedModel& b) {
  CHECK(a.kind == b.kind);
  CHECK(a.encoder_end == b.encoder_end);
  CHECK(a.calibrated == b.calibrated);
  CHECK(a.threshold == b.threshold);
  CHECK(a.lambda == b.lambda);
  CHECK(a.fgsm.epsilon == b.fgsm.epsilon);
  CHECK(a.fgsm.alpha == b.fgsm.alpha);
  CHECK(a.fgsm.intercept_layer == b.fgsm.intercept_layer);
  CHECK(a.seed == b.seed);
  CHECK(a.hp.lr == b.hp.lr);
  CHECK(a.hp.batch_size == b.hp.batch_size);
  CHECK(a.hp.hidden_dim == b.hp.hidden_dim);
  CHECK(a.hp.disc_hidden_dim == b.hp.disc_hidden_dim);
  CHECK(a.hp.dropout_rate == b.hp.dropout_rate);
  CHECK(a.hp.epochs == b.hp.epochs);
  CHECK(a.stats.age_cutoff == b.stats.age_cutoff);
  CHECK(a.stats.mean == b.stats.mean);
  CHECK(a.stats.stddev == b.stats.stddev);
  CHECK(a.stats.impute == b.stats.impute);

  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].epoch == b.log[i].epoch);
    CHECK(a.log[i].main_loss == b.log[i].main_loss);
    CHECK(a.log[i].main_acc == b.log[i].main_acc);
    CHECK(a.log[i].disc_acc == b.log[i].disc_acc);
  }

  REQUIRE(a.stack.layers.size() == b.stack.layers.size());
  for (std::size_t i = 0; i < a.stack.layers.size(); ++i) {
    const Layer& la = a.stack.layers[i];
    const Layer& lb = b.stack.layers[i];
    CHECK(la.spec.kind == lb.spec.kind);
    CHECK(la.spec.in_dim == lb.spec.in_dim);
    CHECK(la.spec.out_dim == lb.spec.out_dim);
    CHECK(la.spec.rate == lb.spec.rate);
    REQUIRE(la.params.size() == lb.params.size());
    for (std::size_t p = 0; p < la.params.size(); ++p) {
      CHECK(la.params[p].name == lb.params[p].name);
      CHECK(la.params[p].value.bit_equal(lb.params[p].value));
    }
    if (la.spec.kind == LayerKind::batchnorm) {
      CHECK(la.running_mean.bit_equal(lb.running_mean));
      CHECK(la.running_var.bit_equal(lb.running_var));
    }
  }
}

}  // namespace

TEST_CASE("save then load reproduces the model bit for bit") {
  TrainedModel model = small_adv_model();
  const fs::path path = temp_file("roundtrip.tgmd");
  save_model(model, path.string());
  TrainedModel loaded = load_model(path.string());

  check_models_identical(model, loaded);

  Matrix probe = random_matrix(40, 7, 45);
  CHECK(predict_proba(model, probe) == predict_proba(loaded, probe));
  CHECK(encode(model, probe).bit_equal(encode(loaded, probe)));
  CHECK(predict(model, probe) == predict(loaded, probe));
}

TEST_CASE("adv_per models keep their perturbation settings through a round trip") {
  Matrix x = random_matrix(64, 5, 46);
  std::vector<double> y = random_labels(64, 47);
  FgsmConfig fgsm;
  fgsm.epsilon = 0.125;
  fgsm.alpha = 0.75;
  Hyperparams hp = tiny_hp();
  hp.epochs = 1;
  TrainedModel model = train_adv_per(x, y, hp, fgsm, 48);
  model.stats.mean.assign(5, 0.0);
  model.stats.stddev.assign(5, 1.0);
  model.stats.impute.assign(5, 0.0);

  const fs::path path = temp_file("adv_per.tgmd");
  save_model(model, path.string());
  TrainedModel loaded = load_model(path.string());
  CHECK(loaded.kind == ModelKind::adv_per);
  CHECK(loaded.fgsm.epsilon == 0.125);
  CHECK(loaded.fgsm.alpha == 0.75);
  CHECK(loaded.fgsm.intercept_layer == model.fgsm.intercept_layer);
  check_models_identical(model, loaded);
}

TEST_CASE("a missing model file is a data error") {
  try {
    load_model(temp_file("does_not_exist.tgmd").string());
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::data);
  }
}

TEST_CASE("a file with the wrong magic is rejected") {
  const fs::path path = temp_file("not_a_model.tgmd");
  std::ofstream(path) << "definitely not a model file, just text padding";
  try {
    load_model(path.string());
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::data);
    CHECK(std::string(e.what()).find("not a model file") != std::string::npos);
  }
}

TEST_CASE("a truncated model file is rejected") {
  TrainedModel model = small_adv_model();
  const fs::path full = temp_file("full.tgmd");
  save_model(model, full.string());

  std::ifstream in(full, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() > 200);
  const fs::path cut = temp_file("cut.tgmd");
  std::ofstream(cut, std::ios::binary) << bytes.substr(0, bytes.size() / 2);

  try {
    load_model(cut.string());
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::data);
  }
}

TEST_CASE("an unsupported format version is rejected") {
  const fs::path path = temp_file("future.tgmd");
  {
    std::ofstream out(path, std::ios::binary);
    out.write("TGMD", 4);
    const unsigned char version[4] = {9, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(version), 4);
    out << std::string(64, '\0');
  }
  try {
    load_model(path.string());
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::data);
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
}
