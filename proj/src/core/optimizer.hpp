#pragma once

#include <cstdint>
#include <vector>

#include "core/network.hpp"

namespace tabguard {

struct AdamConfig {
  double lr = 0.0008;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moment buffers are keyed by parameter order in
// the stack, which is fixed after construction.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig cfg) : cfg_(cfg) {}

  // Applies one update from the accumulated gradients, then zeroes them and
  // bumps the stack version. Calling step without a backward in between is a
  // protocol violation.
  void step(LayerStack& stack);

  std::uint64_t steps_taken() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::uint64_t t_ = 0;
};

}  // namespace tabguard
