#include "core/loss.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace tabguard {

LossResult bce_loss(const Matrix& probs, const Matrix& labels) {
  if (!probs.same_shape(labels)) raise_invalid("probs and labels shape mismatch");
  if (probs.size() == 0) raise_invalid("bce_loss on empty batch");
  const std::size_t n = probs.size();
  LossResult res;
  res.grad = Matrix(probs.rows(), probs.cols());
  double total = 0.0;
  const double invn = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = labels.data()[i];
    if (y != 0.0 && y != 1.0) raise_invalid("bce_loss labels must be 0 or 1");
    const double p = std::clamp(probs.data()[i], kProbClamp, 1.0 - kProbClamp);
    total += y == 1.0 ? -std::log(p) : -std::log(1.0 - p);
    res.grad.data()[i] = invn * (p - y) / (p * (1.0 - p));
  }
  res.loss = total * invn;
  if (!std::isfinite(res.loss)) raise_numeric("non-finite loss");
  return res;
}

}  // namespace tabguard
