#pragma once

// Independent re-implementations used as test oracles. Everything here is
// deliberately written the slow, obvious way and must not call into the
// library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// ---- brute-force AUC: P(s+ > s-) + 0.5 P(s+ = s-) over all pairs ----

inline double pair_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// ---- exhaustive threshold sweep matching the calibration contract ----
// Candidates are the distinct scores; prediction rule is score >= t. Among
// candidates with recall in [lo, hi] pick max specificity, ties toward the
// larger threshold. Empty band falls back to smallest recall >= lo, again
// preferring the larger threshold on exact recall ties via the scan order.

struct SweepResult {
  bool ok = false;
  double threshold = 0.0;
};

inline SweepResult sweep_threshold(const std::vector<double>& scores,
                                   const std::vector<double>& labels, double lo, double hi) {
  std::vector<double> cand = scores;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  struct Row {
    double t, recall, spec;
  };
  std::vector<Row> rows;
  for (double t : cand) {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      bool pred = scores[i] >= t;
      bool pos = labels[i] == 1.0;
      if (pos && pred) ++tp;
      else if (pos) ++fn;
      else if (pred) ++fp;
      else ++tn;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    double spec = (tn + fp) == 0 ? 0.0 : static_cast<double>(tn) / static_cast<double>(tn + fp);
    rows.push_back({t, recall, spec});
  }

  SweepResult best;
  double best_spec = -1.0;
  for (const Row& r : rows) {
    if (r.recall < lo || r.recall > hi) continue;
    if (r.spec > best_spec || (r.spec == best_spec && r.t > best.threshold)) {
      best_spec = r.spec;
      best.threshold = r.t;
      best.ok = true;
    }
  }
  if (best.ok) return best;

  double best_recall = 2.0;
  for (const Row& r : rows) {
    if (r.recall < lo) continue;
    if (r.recall < best_recall || (r.recall == best_recall && r.t > best.threshold)) {
      best_recall = r.recall;
      best.threshold = r.t;
      best.ok = true;
    }
  }
  return best;
}

// ---- sort-based median, one column at a time ----

inline double sort_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- central finite differences over a scalar function of one coordinate ----
// Returns d f / d x estimated at the current value via (f(x+h) - f(x-h)) / 2h.

inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Relative agreement check used by the gradient tests: passes when the two
// values agree within `rel` relative error, with an absolute floor for
// near-zero gradients where relative error is meaningless.

inline bool grads_agree(double analytic, double numeric, double rel = 1e-3,
                        double abs_floor = 1e-7) {
  double diff = std::fabs(analytic - numeric);
  if (diff <= abs_floor) return true;
  double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  return diff <= rel * scale;
}

// ---- straight-line forward pass for a stack of dense / relu / sigmoid ----
// Hand-rolled triple loop; supports exactly the layer mix the oracle tests
// build. Weights are (in x out) row-major, bias length out.

struct DenseParams {
  std::size_t in = 0, out = 0;
  std::vector<double> w;  // in * out
  std::vector<double> b;  // out
};

inline std::vector<double> dense_apply(const DenseParams& p, const std::vector<double>& x) {
  std::vector<double> y(p.out, 0.0);
  for (std::size_t o = 0; o < p.out; ++o) {
    double acc = p.b[o];
    for (std::size_t i = 0; i < p.in; ++i) acc += x[i] * p.w[i * p.out + o];
    y[o] = acc;
  }
  return y;
}

inline std::vector<double> relu_apply(std::vector<double> x) {
  for (double& v : x) v = v > 0.0 ? v : 0.0;
  return x;
}

inline std::vector<double> sigmoid_apply(std::vector<double> x) {
  for (double& v : x) v = 1.0 / (1.0 + std::exp(-v));
  return x;
}

// ---- linear probe: logistic regression by plain gradient descent ----
// Used to certify that an attribute is linearly recoverable from features
// (or not).

struct LinearProbe {
  std::vector<double> w;
  double b = 0.0;

  double score(const std::vector<double>& x) const {
    double z = b;
    for (std::size_t c = 0; c < w.size(); ++c) z += w[c] * x[c];
    return z;
  }
};

inline LinearProbe fit_linear_probe(const std::vector<std::vector<double>>& x,
                                    const std::vector<double>& y, std::size_t iters = 400,
                                    double lr = 0.1) {
  std::size_t n = x.size();
  std::size_t d = x[0].size();
  LinearProbe probe;
  probe.w.assign(d, 0.0);
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<double> gw(d, 0.0);
    double gb = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double p = 1.0 / (1.0 + std::exp(-probe.score(x[r])));
      double e = p - y[r];
      for (std::size_t c = 0; c < d; ++c) gw[c] += e * x[r][c];
      gb += e;
    }
    for (std::size_t c = 0; c < d; ++c) probe.w[c] -= lr * gw[c] / static_cast<double>(n);
    probe.b -= lr * gb / static_cast<double>(n);
  }
  return probe;
}

// In-sample AUC of a fitted probe.
inline double linear_probe_auc(const std::vector<std::vector<double>>& x,
                               const std::vector<double>& y, std::size_t iters = 400,
                               double lr = 0.1) {
  LinearProbe probe = fit_linear_probe(x, y, iters, lr);
  std::vector<double> scores(x.size(), 0.0);
  for (std::size_t r = 0; r < x.size(); ++r) scores[r] = probe.score(x[r]);
  return pair_auc(scores, y);
}

// Fits on the first half of the rows and reports AUC on the second half,
// so chance-level attributes score 0.5 without in-sample optimism.
inline double linear_probe_auc_holdout(const std::vector<std::vector<double>>& x,
                                       const std::vector<double>& y, std::size_t iters = 400,
                                       double lr = 0.1) {
  std::size_t half = x.size() / 2;
  std::vector<std::vector<double>> x_fit(x.begin(), x.begin() + half);
  std::vector<double> y_fit(y.begin(), y.begin() + half);
  LinearProbe probe = fit_linear_probe(x_fit, y_fit, iters, lr);
  std::vector<double> scores, labels;
  for (std::size_t r = half; r < x.size(); ++r) {
    scores.push_back(probe.score(x[r]));
    labels.push_back(y[r]);
  }
  return pair_auc(scores, labels);
}

// ---- Pearson correlation ----

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return num / std::sqrt(va * vb);
}

// ---- scalar Adam hand-trace ----
// Reproduces the update rule step by step for a single parameter.

struct ScalarAdam {
  double lr, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double m = 0.0, v = 0.0;
  std::uint64_t t = 0;

  double step(double param, double grad) {
    ++t;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad * grad;
    double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
    double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
    return param - lr * mhat / (std::sqrt(vhat) + eps);
  }
};

}  // namespace oracle
