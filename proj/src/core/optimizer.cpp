#include "core/optimizer.hpp"

#include <cmath>

#include "core/error.hpp"

namespace tabguard {

void AdamOptimizer::step(LayerStack& stack) {
  if (!stack.grads_ready) raise_protocol("optimizer step before backward");
  std::vector<ParamTensor*> params = stack.all_params();
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const ParamTensor* p : params) {
      m_.emplace_back(p->value.rows(), p->value.cols());
      v_.emplace_back(p->value.rows(), p->value.cols());
    }
  }
  if (m_.size() != params.size()) raise_internal("optimizer bound to a different stack");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t p = 0; p < params.size(); ++p) {
    ParamTensor& par = *params[p];
    if (!par.value.same_shape(m_[p])) raise_internal("optimizer moment shape drift");
    if (!all_finite(par.grad.flat())) raise_numeric("non-finite gradient in " + par.name);
    double* theta = par.value.data();
    const double* g = par.grad.data();
    double* m = m_[p].data();
    double* v = v_[p].data();
    for (std::size_t i = 0; i < par.value.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      theta[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
  ++stack.version;
  stack.zero_grads();
}

}  // namespace tabguard
