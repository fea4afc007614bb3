#pragma once

#include <cstdint>
#include <vector>

#include "core/layers.hpp"

namespace tabguard {

// Fixed sequence of layers with a version counter. The counter changes
// whenever parameters change, so traces recorded against an older version
// can be rejected instead of silently producing wrong gradients.
struct LayerStack {
  std::vector<Layer> layers;
  std::uint64_t version = 1;
  bool grads_ready = false;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::vector<ParamTensor*> all_params();
  std::vector<const ParamTensor*> all_params() const;
  void zero_grads();
};

LayerStack build_stack(const std::vector<LayerSpec>& specs);
void init_stack(LayerStack& stack, Rng& rng);

// Everything a backward pass needs from one forward pass. `outputs[i]` is
// the output of layer i; batchnorm keeps (xhat, inv_std) and dropout keeps
// its scaled mask in the aux slots. When `inject_at` is non-negative, layer
// `inject_at` reads `injected` as its input instead of the previous layer's
// output; the layers below still see their own clean activations.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> outputs;
  std::vector<Matrix> aux_a;
  std::vector<Matrix> aux_b;
  bool train_mode = false;
  std::uint64_t stack_version = 0;
  std::ptrdiff_t inject_at = -1;
  Matrix injected;

  const Matrix& layer_input(std::size_t i) const {
    if (inject_at >= 0 && static_cast<std::size_t>(inject_at) == i) return injected;
    return i == 0 ? input : outputs[i - 1];
  }
  const Matrix& final_output() const { return outputs.back(); }
};

struct ForwardOptions {
  bool train = false;
  Rng* rng = nullptr;  // required when training a stack that contains dropout
};

ForwardTrace forward(LayerStack& stack, const Matrix& x, const ForwardOptions& opts);

// Eval-mode forward; never mutates the stack.
ForwardTrace eval_forward(const LayerStack& stack, const Matrix& x);

// Eval-mode forward through layers [0, end) only; returns the boundary
// activation.
Matrix eval_prefix(const LayerStack& stack, const Matrix& x, std::size_t end);

// Backpropagates `upstream` (gradient at the output of layer `from - 1`)
// down to the input of layer `to`, accumulating parameter gradients for the
// layers in [to, from). Returns the gradient at boundary `to`.
Matrix backward_span(LayerStack& stack, const ForwardTrace& trace, const Matrix& upstream,
                     std::size_t from, std::size_t to = 0);

// Re-runs layers [k, end) with `injected` as the input to layer k, reusing
// the base trace's dropout masks and recomputing batch statistics without
// touching running stats. The returned trace shares the clean prefix, so a
// full backward over it yields the perturbed-input gradient.
ForwardTrace replay_from(LayerStack& stack, const ForwardTrace& base, std::size_t k,
                         const Matrix& injected);

}  // namespace tabguard
