#pragma once

#include "core/loss.hpp"
#include "core/network.hpp"
#include "core/optimizer.hpp"

namespace tabguard {

struct GrlConfig {
  double lambda = 2.0;
};

void validate_grl(const GrlConfig& cfg);

// Identity in the forward direction.
Matrix grl_forward(const Matrix& x);

// Reverses and scales: returns -lambda * upstream elementwise. lambda is
// applied here and nowhere else.
Matrix grl_backward(const Matrix& upstream, double lambda);

// eta = epsilon * sign(grad), with sign(0) = 0.
Matrix fgsm_eta(const Matrix& grad_at_h, double epsilon);

// Sentinel for "intercept at the encoder boundary", resolved by the trainer
// that knows where the encoder ends.
inline constexpr std::size_t kInterceptAtEncoder = static_cast<std::size_t>(-1);

struct FgsmConfig {
  double epsilon = 0.05;
  double alpha = 0.5;
  // Layer whose output is intercepted; the perturbation is added to that
  // output. Must not be the final layer.
  std::size_t intercept_layer = kInterceptAtEncoder;
};

void validate_fgsm(const FgsmConfig& cfg, const LayerStack& stack);

struct FgsmStepResult {
  double clean_loss = 0.0;
  double adversarial_loss = 0.0;
  double combined_objective = 0.0;  // alpha * clean + (1 - alpha) * adversarial
};

// One training step with FGSM regularization:
//   train-mode forward; direction gradient at the intercepted output using
//   the model's own hard predictions; snapshot the layers below the
//   interception point; replay the tail with h + eta and backpropagate
//   against the true labels; restore the snapshot bit-exactly; clean
//   backward; single optimizer step on alpha * g_clean + (1-alpha) * g_adv.
FgsmStepResult fgsm_training_step(LayerStack& stack, const Matrix& x, const Matrix& y,
                                  const FgsmConfig& cfg, AdamOptimizer& opt, Rng& rng);

}  // namespace tabguard
