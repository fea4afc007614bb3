#pragma once

#include "core/matrix.hpp"

namespace tabguard {

inline constexpr double kProbClamp = 1e-7;

struct LossResult {
  double loss = 0.0;
  Matrix grad;  // d(loss)/d(probs), same shape as probs
};

// Mean binary cross-entropy over the batch. Probabilities are clamped to
// [kProbClamp, 1 - kProbClamp] before the log; the gradient is taken with
// respect to the clamped value.
LossResult bce_loss(const Matrix& probs, const Matrix& labels);

}  // namespace tabguard
