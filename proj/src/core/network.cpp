#include "core/network.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace tabguard {

namespace {

void check_finite_after(const Matrix& m, std::size_t layer_index, LayerKind kind) {
  if (!all_finite(m.flat())) {
    raise_numeric("non-finite activation after layer " + std::to_string(layer_index) + " (" +
                  layer_kind_name(kind) + ")");
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Runs one layer in isolation. `reuse_mask` replays a recorded dropout mask
// instead of drawing a fresh one; `update_running` gates the batchnorm
// running-stat update so replays leave model state untouched.
void run_layer(Layer& layer, const Matrix& x, bool train, Rng* rng, const Matrix* reuse_mask,
               bool update_running, Matrix& out, Matrix& aux_a, Matrix& aux_b) {
  const LayerSpec& spec = layer.spec;
  if (x.cols() != spec.in_dim) raise_internal("layer input width mismatch");
  const std::size_t n = x.rows();
  const std::size_t d = spec.in_dim;
  switch (spec.kind) {
    case LayerKind::dense: {
      matmul(x, layer.params[0].value, out);
      const double* b = layer.params[1].value.data();
      for (std::size_t i = 0; i < n; ++i) {
        double* row = out.data() + i * spec.out_dim;
        for (std::size_t j = 0; j < spec.out_dim; ++j) row[j] += b[j];
      }
      break;
    }
    case LayerKind::batchnorm: {
      out = Matrix(n, d);
      const double* gamma = layer.params[0].value.data();
      const double* beta = layer.params[1].value.data();
      if (train) {
        if (n == 0) raise_internal("batchnorm on empty batch");
        Matrix mean(1, d), var(1, d);
        for (std::size_t i = 0; i < n; ++i) {
          const double* row = x.data() + i * d;
          for (std::size_t j = 0; j < d; ++j) mean.data()[j] += row[j];
        }
        for (std::size_t j = 0; j < d; ++j) mean.data()[j] /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double* row = x.data() + i * d;
          for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - mean.data()[j];
            var.data()[j] += c * c;
          }
        }
        for (std::size_t j = 0; j < d; ++j) var.data()[j] /= static_cast<double>(n);
        aux_a = Matrix(n, d);
        aux_b = Matrix(1, d);
        for (std::size_t j = 0; j < d; ++j) {
          aux_b.data()[j] = 1.0 / std::sqrt(var.data()[j] + kBatchnormEps);
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double* row = x.data() + i * d;
          double* xh = aux_a.data() + i * d;
          double* orow = out.data() + i * d;
          for (std::size_t j = 0; j < d; ++j) {
            xh[j] = (row[j] - mean.data()[j]) * aux_b.data()[j];
            orow[j] = gamma[j] * xh[j] + beta[j];
          }
        }
        if (update_running) {
          for (std::size_t j = 0; j < d; ++j) {
            layer.running_mean.data()[j] = (1.0 - kBatchnormMomentum) * layer.running_mean.data()[j] +
                                           kBatchnormMomentum * mean.data()[j];
            layer.running_var.data()[j] = (1.0 - kBatchnormMomentum) * layer.running_var.data()[j] +
                                          kBatchnormMomentum * var.data()[j];
          }
        }
      } else {
        Matrix inv(1, d);
        for (std::size_t j = 0; j < d; ++j) {
          inv.data()[j] = 1.0 / std::sqrt(layer.running_var.data()[j] + kBatchnormEps);
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double* row = x.data() + i * d;
          double* orow = out.data() + i * d;
          for (std::size_t j = 0; j < d; ++j) {
            orow[j] = gamma[j] * (row[j] - layer.running_mean.data()[j]) * inv.data()[j] + beta[j];
          }
        }
      }
      break;
    }
    case LayerKind::relu: {
      out = Matrix(n, d);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x.data()[i];
        out.data()[i] = v > 0.0 ? v : 0.0;
      }
      break;
    }
    case LayerKind::dropout: {
      out = Matrix(n, d);
      if (!train) {
        for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = x.data()[i];
        break;
      }
      const double keep = 1.0 - spec.rate;
      if (reuse_mask != nullptr) {
        if (!reuse_mask->same_shape(x)) raise_internal("dropout mask shape mismatch on replay");
        aux_a = *reuse_mask;
      } else {
        if (rng == nullptr) raise_protocol("training forward through dropout requires an rng");
        aux_a = Matrix(n, d);
        for (std::size_t i = 0; i < x.size(); ++i) {
          aux_a.data()[i] = rng->uniform() < spec.rate ? 0.0 : 1.0 / keep;
        }
      }
      for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = x.data()[i] * aux_a.data()[i];
      break;
    }
    case LayerKind::sigmoid: {
      out = Matrix(n, d);
      for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = stable_sigmoid(x.data()[i]);
      break;
    }
  }
}

}  // namespace

std::size_t LayerStack::input_dim() const {
  if (layers.empty()) raise_internal("empty layer stack");
  return layers.front().spec.in_dim;
}

std::size_t LayerStack::output_dim() const {
  if (layers.empty()) raise_internal("empty layer stack");
  return layers.back().spec.out_dim;
}

std::vector<ParamTensor*> LayerStack::all_params() {
  std::vector<ParamTensor*> out;
  for (Layer& layer : layers) {
    for (ParamTensor& p : layer.params) out.push_back(&p);
  }
  return out;
}

std::vector<const ParamTensor*> LayerStack::all_params() const {
  std::vector<const ParamTensor*> out;
  for (const Layer& layer : layers) {
    for (const ParamTensor& p : layer.params) out.push_back(&p);
  }
  return out;
}

void LayerStack::zero_grads() {
  for (Layer& layer : layers) {
    for (ParamTensor& p : layer.params) p.zero_grad();
  }
  grads_ready = false;
}

LayerStack build_stack(const std::vector<LayerSpec>& specs) {
  if (specs.empty()) raise_invalid("layer stack needs at least one layer");
  LayerStack stack;
  std::size_t width = specs.front().in_dim;
  for (const LayerSpec& spec : specs) {
    if (spec.in_dim != width) raise_invalid("layer dims do not chain");
    width = spec.out_dim;
    stack.layers.push_back(make_layer(spec));
  }
  return stack;
}

void init_stack(LayerStack& stack, Rng& rng) {
  for (Layer& layer : stack.layers) init_layer(layer, rng);
  ++stack.version;
  stack.zero_grads();
}

ForwardTrace forward(LayerStack& stack, const Matrix& x, const ForwardOptions& opts) {
  if (stack.layers.empty()) raise_internal("forward through empty stack");
  if (x.cols() != stack.input_dim()) raise_invalid("input width does not match network input dim");
  if (!all_finite(x.flat())) raise_numeric("non-finite network input");
  ForwardTrace trace;
  trace.input = x;
  trace.train_mode = opts.train;
  trace.stack_version = stack.version;
  const std::size_t count = stack.layers.size();
  trace.outputs.resize(count);
  trace.aux_a.resize(count);
  trace.aux_b.resize(count);
  const Matrix* cur = &trace.input;
  for (std::size_t i = 0; i < count; ++i) {
    run_layer(stack.layers[i], *cur, opts.train, opts.rng, nullptr, opts.train, trace.outputs[i],
              trace.aux_a[i], trace.aux_b[i]);
    check_finite_after(trace.outputs[i], i, stack.layers[i].spec.kind);
    cur = &trace.outputs[i];
  }
  return trace;
}

ForwardTrace eval_forward(const LayerStack& stack, const Matrix& x) {
  // Eval mode touches neither parameters nor running statistics.
  return forward(const_cast<LayerStack&>(stack), x, ForwardOptions{});
}

Matrix eval_prefix(const LayerStack& stack, const Matrix& x, std::size_t end) {
  if (end > stack.layers.size()) raise_invalid("prefix end out of range");
  if (x.cols() != stack.input_dim()) raise_invalid("input width does not match network input dim");
  if (!all_finite(x.flat())) raise_numeric("non-finite network input");
  Matrix cur = x;
  Matrix aux_a, aux_b, out;
  for (std::size_t i = 0; i < end; ++i) {
    run_layer(const_cast<Layer&>(stack.layers[i]), cur, false, nullptr, nullptr, false, out, aux_a,
              aux_b);
    check_finite_after(out, i, stack.layers[i].spec.kind);
    cur = std::move(out);
  }
  return cur;
}

Matrix backward_span(LayerStack& stack, const ForwardTrace& trace, const Matrix& upstream,
                     std::size_t from, std::size_t to) {
  if (trace.stack_version != stack.version) {
    raise_protocol("backward over a trace from a different parameter version");
  }
  if (!trace.train_mode) raise_protocol("backward over an eval-mode trace");
  if (from > stack.layers.size() || to > from) raise_invalid("bad backward span");
  if (from > 0) {
    const Matrix& ref = trace.outputs[from - 1];
    if (!upstream.same_shape(ref)) raise_invalid("upstream gradient shape mismatch");
  }
  Matrix grad = upstream;
  Matrix next;
  for (std::size_t idx = from; idx > to; --idx) {
    const std::size_t i = idx - 1;
    Layer& layer = stack.layers[i];
    const Matrix& x = trace.layer_input(i);
    const std::size_t n = grad.rows();
    switch (layer.spec.kind) {
      case LayerKind::dense: {
        matmul_at_accum(x, grad, layer.params[0].grad);
        double* db = layer.params[1].grad.data();
        for (std::size_t r = 0; r < n; ++r) {
          const double* row = grad.data() + r * layer.spec.out_dim;
          for (std::size_t j = 0; j < layer.spec.out_dim; ++j) db[j] += row[j];
        }
        matmul_bt(grad, layer.params[0].value, next);
        grad = next;
        break;
      }
      case LayerKind::batchnorm: {
        const std::size_t d = layer.spec.in_dim;
        const Matrix& xhat = trace.aux_a[i];
        const Matrix& inv_std = trace.aux_b[i];
        if (xhat.empty()) raise_protocol("batchnorm backward needs train-mode statistics");
        const double* gamma = layer.params[0].value.data();
        double* dgamma = layer.params[0].grad.data();
        double* dbeta = layer.params[1].grad.data();
        Matrix dxhat(n, d);
        std::vector<double> s1(d, 0.0), s2(d, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          const double* grow = grad.data() + r * d;
          const double* xrow = xhat.data() + r * d;
          double* drow = dxhat.data() + r * d;
          for (std::size_t j = 0; j < d; ++j) {
            dgamma[j] += grow[j] * xrow[j];
            dbeta[j] += grow[j];
            drow[j] = grow[j] * gamma[j];
            s1[j] += drow[j];
            s2[j] += drow[j] * xrow[j];
          }
        }
        next = Matrix(n, d);
        const double invn = 1.0 / static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) {
          const double* drow = dxhat.data() + r * d;
          const double* xrow = xhat.data() + r * d;
          double* orow = next.data() + r * d;
          for (std::size_t j = 0; j < d; ++j) {
            orow[j] = inv_std.data()[j] * invn *
                      (static_cast<double>(n) * drow[j] - s1[j] - xrow[j] * s2[j]);
          }
        }
        grad = next;
        break;
      }
      case LayerKind::relu: {
        const Matrix& out = trace.outputs[i];
        next = Matrix(grad.rows(), grad.cols());
        for (std::size_t j = 0; j < grad.size(); ++j) {
          next.data()[j] = out.data()[j] > 0.0 ? grad.data()[j] : 0.0;
        }
        grad = next;
        break;
      }
      case LayerKind::dropout: {
        const Matrix& mask = trace.aux_a[i];
        if (mask.empty()) raise_protocol("dropout backward needs a recorded mask");
        next = Matrix(grad.rows(), grad.cols());
        for (std::size_t j = 0; j < grad.size(); ++j) {
          next.data()[j] = grad.data()[j] * mask.data()[j];
        }
        grad = next;
        break;
      }
      case LayerKind::sigmoid: {
        const Matrix& out = trace.outputs[i];
        next = Matrix(grad.rows(), grad.cols());
        for (std::size_t j = 0; j < grad.size(); ++j) {
          const double s = out.data()[j];
          next.data()[j] = grad.data()[j] * s * (1.0 - s);
        }
        grad = next;
        break;
      }
    }
    if (!all_finite(grad.flat())) {
      raise_numeric("non-finite gradient below layer " + std::to_string(i));
    }
  }
  stack.grads_ready = true;
  return grad;
}

ForwardTrace replay_from(LayerStack& stack, const ForwardTrace& base, std::size_t k,
                         const Matrix& injected) {
  if (base.stack_version != stack.version) {
    raise_protocol("replay over a trace from a different parameter version");
  }
  if (!base.train_mode) raise_protocol("replay requires a train-mode trace");
  if (k >= stack.layers.size()) raise_invalid("replay boundary out of range");
  const Matrix& clean = k == 0 ? base.input : base.outputs[k - 1];
  if (!injected.same_shape(clean)) raise_invalid("injected activation shape mismatch");
  if (!all_finite(injected.flat())) raise_numeric("non-finite injected activation");

  ForwardTrace trace;
  trace.input = base.input;
  trace.train_mode = true;
  trace.stack_version = base.stack_version;
  trace.inject_at = static_cast<std::ptrdiff_t>(k);
  trace.injected = injected;
  const std::size_t count = stack.layers.size();
  trace.outputs.resize(count);
  trace.aux_a.resize(count);
  trace.aux_b.resize(count);
  for (std::size_t i = 0; i < k; ++i) {
    trace.outputs[i] = base.outputs[i];
    trace.aux_a[i] = base.aux_a[i];
    trace.aux_b[i] = base.aux_b[i];
  }
  const Matrix* cur = &trace.injected;
  for (std::size_t i = k; i < count; ++i) {
    const Matrix* mask = nullptr;
    if (stack.layers[i].spec.kind == LayerKind::dropout) mask = &base.aux_a[i];
    run_layer(stack.layers[i], *cur, true, nullptr, mask, false, trace.outputs[i], trace.aux_a[i],
              trace.aux_b[i]);
    check_finite_after(trace.outputs[i], i, stack.layers[i].spec.kind);
    cur = &trace.outputs[i];
  }
  return trace;
}

}  // namespace tabguard
