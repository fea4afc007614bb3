#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/matrix.hpp"
#include "core/rng.hpp"
#include "core/tensor.hpp"

namespace tabguard {

enum class LayerKind : std::uint8_t {
  dense,
  batchnorm,
  relu,
  dropout,
  sigmoid,
};

const char* layer_kind_name(LayerKind kind);
LayerKind layer_kind_from_name(const std::string& name);

struct LayerSpec {
  LayerKind kind = LayerKind::dense;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  double rate = 0.0;  // dropout only

  static LayerSpec make_dense(std::size_t in, std::size_t out);
  static LayerSpec make_batchnorm(std::size_t dim);
  static LayerSpec make_relu(std::size_t dim);
  static LayerSpec make_dropout(std::size_t dim, double rate);
  static LayerSpec make_sigmoid(std::size_t dim);
};

inline constexpr double kBatchnormEps = 1e-5;
inline constexpr double kBatchnormMomentum = 0.1;

// One instantiated layer. Dense holds W (in x out) and b (1 x out);
// batchnorm holds gamma and beta plus non-learnable running stats.
struct Layer {
  LayerSpec spec;
  std::vector<ParamTensor> params;
  Matrix running_mean;
  Matrix running_var;
};

Layer make_layer(const LayerSpec& spec);

// Kaiming-style uniform init for dense weights, bound sqrt(6 / fan_in).
// Biases and beta start at zero, gamma at one, running stats at (0, 1).
void init_layer(Layer& layer, Rng& rng);

}  // namespace tabguard
