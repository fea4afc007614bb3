#include "core/models.hpp"

#include <algorithm>
#include <numeric>

#include "core/error.hpp"
#include "core/loss.hpp"
#include "core/optimizer.hpp"

namespace tabguard {

namespace {

Matrix gather_rows(const Matrix& src, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), src.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double* row = src.data() + idx[r] * src.cols();
    double* orow = out.data() + r * src.cols();
    for (std::size_t c = 0; c < src.cols(); ++c) orow[c] = row[c];
  }
  return out;
}

Matrix gather_column(const std::vector<double>& v, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), 1);
  for (std::size_t r = 0; r < idx.size(); ++r) out.data()[r] = v[idx[r]];
  return out;
}

Matrix matrix_column(const Matrix& m, std::size_t col, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), 1);
  for (std::size_t r = 0; r < idx.size(); ++r) out.data()[r] = m(idx[r], col);
  return out;
}

double accuracy_at_half(const Matrix& probs, const Matrix& labels) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double pred = probs.data()[i] >= 0.5 ? 1.0 : 0.0;
    if (pred == labels.data()[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(probs.size());
}

void check_labels(const std::vector<double>& y) {
  for (double v : y) {
    if (v != 0.0 && v != 1.0) raise_invalid("labels must be 0 or 1");
  }
}

struct DiscBank {
  std::vector<LayerStack> stacks;
  std::vector<AdamOptimizer> opts;
};

TrainedModel train_common(ModelKind kind, const Matrix& x, const std::vector<double>& y,
                          const Matrix* z, const Hyperparams& hp, double lambda, FgsmConfig fgsm,
                          std::uint64_t seed) {
  validate_hyperparams(hp);
  const std::size_t n = x.rows();
  if (n == 0) raise_invalid("training set is empty");
  if (y.size() != n) raise_invalid("labels length does not match features");
  check_labels(y);
  if (kind == ModelKind::adv) {
    if (z == nullptr || z->rows() != n || z->cols() != kProtectedCount) {
      raise_invalid("adversarial training needs one protected column per attribute");
    }
    for (double v : z->flat()) {
      if (v != 0.0 && v != 1.0) raise_invalid("protected attributes must be 0 or 1");
    }
    if (!(lambda >= 0.0)) raise_invalid("grl lambda must be nonnegative");
  }

  TrainedModel model;
  model.kind = kind;
  model.seed = seed;
  model.hp = hp;
  model.lambda = kind == ModelKind::adv ? lambda : 0.0;
  model.stack = build_stack(base_architecture(x.cols(), hp.hidden_dim, hp.dropout_rate));
  model.encoder_end = base_encoder_end();
  Rng init_rng(derive_seed(seed, "model-init"));
  init_stack(model.stack, init_rng);
  const std::size_t depth = model.stack.layers.size();

  if (kind == ModelKind::adv_per) {
    if (fgsm.intercept_layer == kInterceptAtEncoder) {
      fgsm.intercept_layer = model.encoder_end - 1;
    }
    validate_fgsm(fgsm, model.stack);
    model.fgsm = fgsm;
  }

  DiscBank discs;
  if (kind == ModelKind::adv) {
    for (std::size_t i = 0; i < kProtectedCount; ++i) {
      discs.stacks.push_back(
          build_stack(discriminator_architecture(hp.hidden_dim, hp.disc_hidden_dim)));
      Rng disc_rng(derive_seed(seed, "disc-init", i));
      init_stack(discs.stacks.back(), disc_rng);
      discs.opts.emplace_back(AdamConfig{hp.lr, 0.9, 0.999, 1e-8});
    }
  }

  AdamOptimizer opt(AdamConfig{hp.lr, 0.9, 0.999, 1e-8});
  Rng train_rng(derive_seed(seed, "train"));

  // Fixed epoch-log slice: the first tenth of TRAIN, scored in eval mode.
  const std::size_t log_n = std::max<std::size_t>(1, n / 10);
  std::vector<std::size_t> log_idx(log_n);
  std::iota(log_idx.begin(), log_idx.end(), 0);
  const Matrix log_x = gather_rows(x, log_idx);
  const Matrix log_y = gather_column(y, log_idx);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    train_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += hp.batch_size) {
      const std::size_t stop = std::min(n, start + hp.batch_size);
      std::span<const std::size_t> bidx(order.data() + start, stop - start);
      const Matrix bx = gather_rows(x, bidx);
      const Matrix by = gather_column(y, bidx);
      switch (kind) {
        case ModelKind::base: {
          ForwardOptions fo{true, &train_rng};
          ForwardTrace trace = forward(model.stack, bx, fo);
          LossResult loss = bce_loss(trace.final_output(), by);
          backward_span(model.stack, trace, loss.grad, depth, 0);
          opt.step(model.stack);
          break;
        }
        case ModelKind::adv: {
          ForwardOptions fo{true, &train_rng};
          ForwardTrace trace = forward(model.stack, bx, fo);
          LossResult loss = bce_loss(trace.final_output(), by);
          backward_span(model.stack, trace, loss.grad, depth, 0);
          const Matrix h = grl_forward(trace.outputs[model.encoder_end - 1]);
          for (std::size_t i = 0; i < kProtectedCount; ++i) {
            const Matrix bz = matrix_column(*z, i, bidx);
            ForwardOptions dfo{true, nullptr};
            ForwardTrace dtrace = forward(discs.stacks[i], h, dfo);
            LossResult dloss = bce_loss(dtrace.final_output(), bz);
            Matrix g_at_h = backward_span(discs.stacks[i], dtrace, dloss.grad,
                                          discs.stacks[i].layers.size(), 0);
            Matrix reversed = grl_backward(g_at_h, lambda);
            backward_span(model.stack, trace, reversed, model.encoder_end, 0);
          }
          opt.step(model.stack);
          for (std::size_t i = 0; i < kProtectedCount; ++i) {
            discs.opts[i].step(discs.stacks[i]);
          }
          break;
        }
        case ModelKind::adv_per: {
          fgsm_training_step(model.stack, bx, by, fgsm, opt, train_rng);
          break;
        }
      }
    }

    EpochLogEntry entry;
    entry.epoch = epoch;
    ForwardTrace eval = eval_forward(model.stack, log_x);
    LossResult log_loss = bce_loss(eval.final_output(), log_y);
    entry.main_loss = log_loss.loss;
    entry.main_acc = accuracy_at_half(eval.final_output(), log_y);
    if (kind == ModelKind::adv) {
      const Matrix h_log = eval_prefix(model.stack, log_x, model.encoder_end);
      for (std::size_t i = 0; i < kProtectedCount; ++i) {
        const Matrix zl = matrix_column(*z, i, log_idx);
        ForwardTrace deval = eval_forward(discs.stacks[i], h_log);
        entry.disc_acc.push_back(accuracy_at_half(deval.final_output(), zl));
      }
    }
    model.log.push_back(entry);
  }
  return model;
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::base: return "base";
    case ModelKind::adv: return "adv";
    case ModelKind::adv_per: return "adv_per";
  }
  raise_internal("unknown model kind");
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "base") return ModelKind::base;
  if (name == "adv") return ModelKind::adv;
  if (name == "adv_per") return ModelKind::adv_per;
  raise_invalid("unknown model kind: " + name);
}

void validate_hyperparams(const Hyperparams& hp) {
  if (!(hp.lr > 0.0)) raise_invalid("learning rate must be positive");
  if (hp.batch_size == 0) raise_invalid("batch size must be positive");
  if (hp.hidden_dim == 0) raise_invalid("hidden dim must be positive");
  if (hp.disc_hidden_dim == 0) raise_invalid("discriminator hidden dim must be positive");
  if (!(hp.dropout_rate >= 0.0 && hp.dropout_rate < 1.0)) {
    raise_invalid("dropout rate must lie in [0, 1)");
  }
}

std::size_t TrainedModel::encoder_dim() const {
  if (encoder_end == 0 || encoder_end > stack.layers.size()) {
    raise_internal("encoder boundary out of range");
  }
  return stack.layers[encoder_end - 1].spec.out_dim;
}

std::vector<LayerSpec> base_architecture(std::size_t in_dim, std::size_t hidden, double dropout) {
  std::vector<LayerSpec> specs;
  std::size_t width = in_dim;
  for (int block = 0; block < 3; ++block) {
    specs.push_back(LayerSpec::make_dense(width, hidden));
    specs.push_back(LayerSpec::make_batchnorm(hidden));
    specs.push_back(LayerSpec::make_relu(hidden));
    specs.push_back(LayerSpec::make_dropout(hidden, dropout));
    width = hidden;
  }
  specs.push_back(LayerSpec::make_dense(hidden, 1));
  specs.push_back(LayerSpec::make_sigmoid(1));
  return specs;
}

std::size_t base_encoder_end() { return 12; }

std::vector<LayerSpec> discriminator_architecture(std::size_t in_dim, std::size_t hidden) {
  return {
      LayerSpec::make_dense(in_dim, hidden),  LayerSpec::make_relu(hidden),
      LayerSpec::make_dense(hidden, hidden),  LayerSpec::make_relu(hidden),
      LayerSpec::make_dense(hidden, 1),       LayerSpec::make_sigmoid(1),
  };
}

std::size_t count_params(const LayerStack& stack) {
  std::size_t total = 0;
  for (const ParamTensor* p : stack.all_params()) total += p->value.size();
  return total;
}

TrainedModel train_base(const Matrix& x, const std::vector<double>& y, const Hyperparams& hp,
                        std::uint64_t seed) {
  return train_common(ModelKind::base, x, y, nullptr, hp, 0.0, FgsmConfig{}, seed);
}

TrainedModel train_adv(const Matrix& x, const std::vector<double>& y, const Matrix& z,
                       const Hyperparams& hp, double lambda, std::uint64_t seed) {
  return train_common(ModelKind::adv, x, y, &z, hp, lambda, FgsmConfig{}, seed);
}

TrainedModel train_adv_per(const Matrix& x, const std::vector<double>& y, const Hyperparams& hp,
                           FgsmConfig fgsm, std::uint64_t seed) {
  return train_common(ModelKind::adv_per, x, y, nullptr, hp, 0.0, fgsm, seed);
}

Matrix encode(const TrainedModel& model, const Matrix& x) {
  return eval_prefix(model.stack, x, model.encoder_end);
}

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x) {
  ForwardTrace trace = eval_forward(model.stack, x);
  const Matrix& out = trace.final_output();
  return {out.data(), out.data() + out.size()};
}

std::vector<double> hard_labels(const std::vector<double>& probs, double threshold) {
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] >= threshold ? 1.0 : 0.0;
  return out;
}

std::vector<double> predict(const TrainedModel& model, const Matrix& x) {
  if (!model.calibrated) raise_protocol("predict on an uncalibrated model");
  return hard_labels(predict_proba(model, x), model.threshold);
}

}  // namespace tabguard
