#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/adversarial.hpp"
#include "core/network.hpp"
#include "core/preprocess.hpp"

namespace tabguard {

enum class ModelKind : std::uint8_t { base = 0, adv = 1, adv_per = 2 };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

struct Hyperparams {
  double lr = 0.0008;
  std::size_t batch_size = 16;
  std::size_t hidden_dim = 150;
  std::size_t disc_hidden_dim = 300;
  double dropout_rate = 0.5;
  std::size_t epochs = 15;
};

void validate_hyperparams(const Hyperparams& hp);

struct EpochLogEntry {
  std::size_t epoch = 0;  // 1-based
  double main_loss = 0.0;
  double main_acc = 0.0;
  std::vector<double> disc_acc;  // one per protected attribute, adv only
};

// A deployable classifier: the stack, the encoder boundary, the TRAIN
// preprocessing statistics, and the calibrated decision threshold. The
// adversarial trainers return the same shape; discriminators never leave
// the training loop.
struct TrainedModel {
  ModelKind kind = ModelKind::base;
  LayerStack stack;
  std::size_t encoder_end = 0;  // layers [0, encoder_end) form the encoder
  PreprocessStats stats;
  bool calibrated = false;
  double threshold = 0.0;
  double lambda = 0.0;   // adv
  FgsmConfig fgsm{};     // adv_per
  std::uint64_t seed = 0;
  Hyperparams hp{};
  std::vector<EpochLogEntry> log;

  std::size_t encoder_dim() const;
};

// Three hidden blocks of [dense -> batchnorm -> relu -> dropout] at the
// hidden width, then dense -> sigmoid down to one output.
std::vector<LayerSpec> base_architecture(std::size_t in_dim, std::size_t hidden, double dropout);

// Returns the encoder boundary index for base_architecture.
std::size_t base_encoder_end();

// dense -> relu -> dense -> relu -> dense -> sigmoid at the discriminator
// width; no batchnorm or dropout.
std::vector<LayerSpec> discriminator_architecture(std::size_t in_dim, std::size_t hidden);

std::size_t count_params(const LayerStack& stack);

// All trainers take already-standardized features and are bit-reproducible
// from (data, hp, seed). Preprocessing statistics are attached by the
// caller that owns them.
TrainedModel train_base(const Matrix& x, const std::vector<double>& y, const Hyperparams& hp,
                        std::uint64_t seed);

TrainedModel train_adv(const Matrix& x, const std::vector<double>& y, const Matrix& z,
                       const Hyperparams& hp, double lambda, std::uint64_t seed);

// fgsm.intercept_layer == kInterceptAtEncoder resolves to the encoder
// boundary of the built stack.
TrainedModel train_adv_per(const Matrix& x, const std::vector<double>& y, const Hyperparams& hp,
                           FgsmConfig fgsm, std::uint64_t seed);

// Eval-mode encoder output for standardized features.
Matrix encode(const TrainedModel& model, const Matrix& x);

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x);

// Hard labels by "probability >= threshold".
std::vector<double> hard_labels(const std::vector<double>& probs, double threshold);

// Requires a calibrated threshold.
std::vector<double> predict(const TrainedModel& model, const Matrix& x);

}  // namespace tabguard
