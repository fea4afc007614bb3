#include "core/adversarial.hpp"

#include <cstring>

#include "core/error.hpp"

namespace tabguard {

void validate_grl(const GrlConfig& cfg) {
  if (!(cfg.lambda >= 0.0)) raise_invalid("grl lambda must be nonnegative");
}

Matrix grl_forward(const Matrix& x) { return x; }

Matrix grl_backward(const Matrix& upstream, double lambda) {
  if (!(lambda >= 0.0)) raise_invalid("grl lambda must be nonnegative");
  Matrix out(upstream.rows(), upstream.cols());
  for (std::size_t i = 0; i < upstream.size(); ++i) out.data()[i] = -lambda * upstream.data()[i];
  return out;
}

Matrix fgsm_eta(const Matrix& grad_at_h, double epsilon) {
  if (!(epsilon >= 0.0)) raise_invalid("fgsm epsilon must be nonnegative");
  Matrix out(grad_at_h.rows(), grad_at_h.cols());
  for (std::size_t i = 0; i < grad_at_h.size(); ++i) {
    const double g = grad_at_h.data()[i];
    out.data()[i] = g > 0.0 ? epsilon : (g < 0.0 ? -epsilon : 0.0);
  }
  return out;
}

void validate_fgsm(const FgsmConfig& cfg, const LayerStack& stack) {
  if (!(cfg.epsilon >= 0.0)) raise_invalid("fgsm epsilon must be nonnegative");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) raise_invalid("fgsm alpha must lie in [0, 1]");
  if (cfg.intercept_layer + 1 >= stack.layers.size()) {
    raise_invalid("fgsm intercept layer must be a hidden layer");
  }
}

namespace {

struct PrefixSnapshot {
  std::vector<Matrix> values;
  std::vector<Matrix> running;

  static PrefixSnapshot take(const LayerStack& stack, std::size_t boundary) {
    PrefixSnapshot snap;
    for (std::size_t i = 0; i < boundary; ++i) {
      for (const ParamTensor& p : stack.layers[i].params) snap.values.push_back(p.value);
      if (stack.layers[i].spec.kind == LayerKind::batchnorm) {
        snap.running.push_back(stack.layers[i].running_mean);
        snap.running.push_back(stack.layers[i].running_var);
      }
    }
    return snap;
  }

  void restore(LayerStack& stack, std::size_t boundary) const {
    std::size_t vi = 0, ri = 0;
    for (std::size_t i = 0; i < boundary; ++i) {
      for (ParamTensor& p : stack.layers[i].params) {
        if (vi >= values.size() || !p.value.same_shape(values[vi])) {
          raise_internal("parameter shape drift across fgsm snapshot");
        }
        p.value = values[vi++];
      }
      if (stack.layers[i].spec.kind == LayerKind::batchnorm) {
        if (ri + 2 > running.size() ||
            !stack.layers[i].running_mean.same_shape(running[ri]) ||
            !stack.layers[i].running_var.same_shape(running[ri + 1])) {
          raise_internal("batchnorm state shape drift across fgsm snapshot");
        }
        stack.layers[i].running_mean = running[ri];
        stack.layers[i].running_var = running[ri + 1];
        ri += 2;
      }
    }
  }
};

std::vector<Matrix> copy_grads(LayerStack& stack) {
  std::vector<Matrix> out;
  for (ParamTensor* p : stack.all_params()) out.push_back(p->grad);
  return out;
}

}  // namespace

FgsmStepResult fgsm_training_step(LayerStack& stack, const Matrix& x, const Matrix& y,
                                  const FgsmConfig& cfg, AdamOptimizer& opt, Rng& rng) {
  validate_fgsm(cfg, stack);
  const std::size_t boundary = cfg.intercept_layer + 1;
  const std::size_t depth = stack.layers.size();

  ForwardOptions fwd;
  fwd.train = true;
  fwd.rng = &rng;
  ForwardTrace trace = forward(stack, x, fwd);
  const Matrix& probs = trace.final_output();
  LossResult clean = bce_loss(probs, y);

  // Perturbation direction from the cost against the model's own hard
  // predictions, measured at the intercepted output.
  Matrix y_pred(probs.rows(), probs.cols());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    y_pred.data()[i] = probs.data()[i] >= 0.5 ? 1.0 : 0.0;
  }
  LossResult direction = bce_loss(probs, y_pred);
  Matrix grad_at_h = backward_span(stack, trace, direction.grad, depth, boundary);
  stack.zero_grads();

  Matrix eta = fgsm_eta(grad_at_h, cfg.epsilon);
  const Matrix& h = trace.outputs[boundary - 1];
  Matrix h_adv(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.size(); ++i) h_adv.data()[i] = h.data()[i] + eta.data()[i];

  PrefixSnapshot snap = PrefixSnapshot::take(stack, boundary);
  ForwardTrace adv_trace = replay_from(stack, trace, boundary, h_adv);
  LossResult adv = bce_loss(adv_trace.final_output(), y);
  backward_span(stack, adv_trace, adv.grad, depth, 0);
  std::vector<Matrix> g_adv = copy_grads(stack);
  stack.zero_grads();
  snap.restore(stack, boundary);

  backward_span(stack, trace, clean.grad, depth, 0);
  std::vector<ParamTensor*> params = stack.all_params();
  for (std::size_t p = 0; p < params.size(); ++p) {
    double* g = params[p]->grad.data();
    const double* ga = g_adv[p].data();
    const std::size_t count = params[p]->grad.size();
    if (cfg.alpha == 1.0) continue;
    if (cfg.alpha == 0.0) {
      for (std::size_t i = 0; i < count; ++i) g[i] = ga[i];
      continue;
    }
    for (std::size_t i = 0; i < count; ++i) {
      g[i] = cfg.alpha * g[i] + (1.0 - cfg.alpha) * ga[i];
    }
  }
  opt.step(stack);

  FgsmStepResult res;
  res.clean_loss = clean.loss;
  res.adversarial_loss = adv.loss;
  res.combined_objective = cfg.alpha * clean.loss + (1.0 - cfg.alpha) * adv.loss;
  return res;
}

}  // namespace tabguard
