#pragma once

#include <string>

#include "core/matrix.hpp"

namespace tabguard {

// A learnable tensor plus its gradient accumulator. Shapes are fixed at
// construction; the optimizer owns per-tensor moment buffers keyed by order.
struct ParamTensor {
  std::string name;
  Matrix value;
  Matrix grad;

  ParamTensor() = default;
  ParamTensor(std::string n, std::size_t rows, std::size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.fill(0.0); }
};

}  // namespace tabguard
