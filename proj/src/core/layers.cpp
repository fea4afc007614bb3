#include "core/layers.hpp"

#include <cmath>

#include "core/error.hpp"

namespace tabguard {

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::dense: return "dense";
    case LayerKind::batchnorm: return "batchnorm";
    case LayerKind::relu: return "relu";
    case LayerKind::dropout: return "dropout";
    case LayerKind::sigmoid: return "sigmoid";
  }
  raise_internal("unknown layer kind");
}

LayerKind layer_kind_from_name(const std::string& name) {
  if (name == "dense") return LayerKind::dense;
  if (name == "batchnorm") return LayerKind::batchnorm;
  if (name == "relu") return LayerKind::relu;
  if (name == "dropout") return LayerKind::dropout;
  if (name == "sigmoid") return LayerKind::sigmoid;
  raise_invalid("unknown layer kind name: " + name);
}

LayerSpec LayerSpec::make_dense(std::size_t in, std::size_t out) {
  if (in == 0 || out == 0) raise_invalid("dense layer dims must be positive");
  return {LayerKind::dense, in, out, 0.0};
}

LayerSpec LayerSpec::make_batchnorm(std::size_t dim) {
  if (dim == 0) raise_invalid("batchnorm dim must be positive");
  return {LayerKind::batchnorm, dim, dim, 0.0};
}

LayerSpec LayerSpec::make_relu(std::size_t dim) {
  if (dim == 0) raise_invalid("relu dim must be positive");
  return {LayerKind::relu, dim, dim, 0.0};
}

LayerSpec LayerSpec::make_dropout(std::size_t dim, double rate) {
  if (dim == 0) raise_invalid("dropout dim must be positive");
  if (!(rate >= 0.0 && rate < 1.0)) raise_invalid("dropout rate must lie in [0, 1)");
  return {LayerKind::dropout, dim, dim, rate};
}

LayerSpec LayerSpec::make_sigmoid(std::size_t dim) {
  if (dim == 0) raise_invalid("sigmoid dim must be positive");
  return {LayerKind::sigmoid, dim, dim, 0.0};
}

Layer make_layer(const LayerSpec& spec) {
  Layer layer;
  layer.spec = spec;
  switch (spec.kind) {
    case LayerKind::dense:
      layer.params.emplace_back("weight", spec.in_dim, spec.out_dim);
      layer.params.emplace_back("bias", 1, spec.out_dim);
      break;
    case LayerKind::batchnorm:
      layer.params.emplace_back("gamma", 1, spec.in_dim);
      layer.params.emplace_back("beta", 1, spec.in_dim);
      layer.running_mean = Matrix(1, spec.in_dim, 0.0);
      layer.running_var = Matrix(1, spec.in_dim, 1.0);
      break;
    case LayerKind::relu:
    case LayerKind::dropout:
    case LayerKind::sigmoid:
      break;
  }
  return layer;
}

void init_layer(Layer& layer, Rng& rng) {
  switch (layer.spec.kind) {
    case LayerKind::dense: {
      const double bound = std::sqrt(6.0 / static_cast<double>(layer.spec.in_dim));
      for (double& w : layer.params[0].value.flat()) w = rng.uniform(-bound, bound);
      layer.params[1].value.fill(0.0);
      break;
    }
    case LayerKind::batchnorm:
      layer.params[0].value.fill(1.0);
      layer.params[1].value.fill(0.0);
      layer.running_mean.fill(0.0);
      layer.running_var.fill(1.0);
      break;
    case LayerKind::relu:
    case LayerKind::dropout:
    case LayerKind::sigmoid:
      break;
  }
}

}  // namespace tabguard
