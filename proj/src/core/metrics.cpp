#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace tabguard {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double ratio(std::size_t num, std::size_t den) {
  if (den == 0) return kNan;
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_binary(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (v != 0.0 && v != 1.0) raise_invalid(std::string(what) + " must be 0 or 1");
  }
}

}  // namespace

ConfusionCounts confusion(std::span<const double> labels, std::span<const double> predictions) {
  if (labels.size() != predictions.size()) raise_invalid("labels/predictions length mismatch");
  check_binary(labels, "labels");
  check_binary(predictions, "predictions");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1.0) {
      predictions[i] == 1.0 ? ++c.tp : ++c.fn;
    } else {
      predictions[i] == 1.0 ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

MetricSet metric_set(const ConfusionCounts& c, double auc, double threshold) {
  MetricSet m;
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.ppv = m.precision;
  m.specificity = ratio(c.tn, c.tn + c.fp);
  m.npv = ratio(c.tn, c.tn + c.fn);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  if (std::isnan(m.precision) || std::isnan(m.recall) || m.precision + m.recall == 0.0) {
    m.f1 = kNan;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  m.auc = auc;
  m.threshold = threshold;
  return m;
}

double roc_auc(std::span<const double> scores, std::span<const double> labels,
               std::vector<RocPoint>* curve) {
  if (scores.size() != labels.size()) raise_invalid("scores/labels length mismatch");
  check_binary(labels, "labels");
  std::size_t pos = 0, neg = 0;
  for (double y : labels) y == 1.0 ? ++pos : ++neg;
  if (pos == 0 || neg == 0) raise_invalid("roc_auc needs both classes present");

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  if (curve != nullptr) {
    curve->clear();
    curve->push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  }
  double auc = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      labels[order[i]] == 1.0 ? ++tp : ++fp;
      ++i;
    }
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) * 0.5;
    if (curve != nullptr) curve->push_back({s, fpr, tpr});
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  return auc;
}

double calibrate_threshold(std::span<const double> pooled_scores,
                           std::span<const double> pooled_labels, double lo, double hi) {
  if (pooled_scores.size() != pooled_labels.size()) raise_invalid("scores/labels length mismatch");
  check_binary(pooled_labels, "labels");
  std::size_t pos = 0, neg = 0;
  for (double y : pooled_labels) y == 1.0 ? ++pos : ++neg;
  if (pos == 0 || neg == 0) raise_calibration("calibration needs both classes present");

  std::vector<std::size_t> order(pooled_scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pooled_scores[a] != pooled_scores[b]) return pooled_scores[a] > pooled_scores[b];
    return a < b;
  });

  // Walking thresholds from high to low: at threshold = s, everything with
  // score >= s is positive.
  bool found_band = false;
  double best_band_spec = -1.0, best_band_t = 0.0;
  bool found_floor = false;
  double best_floor_recall = 2.0, best_floor_t = 0.0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = pooled_scores[order[i]];
    while (i < order.size() && pooled_scores[order[i]] == s) {
      pooled_labels[order[i]] == 1.0 ? ++tp : ++fp;
      ++i;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(pos);
    const double spec = static_cast<double>(neg - fp) / static_cast<double>(neg);
    if (recall >= lo && recall <= hi) {
      found_band = true;
      if (spec > best_band_spec || (spec == best_band_spec && s > best_band_t)) {
        best_band_spec = spec;
        best_band_t = s;
      }
    }
    if (recall >= lo) {
      found_floor = true;
      if (recall < best_floor_recall || (recall == best_floor_recall && s > best_floor_t)) {
        best_floor_recall = recall;
        best_floor_t = s;
      }
    }
  }
  if (found_band) return best_band_t;
  if (found_floor) return best_floor_t;
  raise_calibration("no threshold reaches the recall floor");
}

std::vector<std::size_t> stratified_kfold(std::span<const double> labels, std::size_t k,
                                          std::uint64_t seed) {
  if (k < 2) raise_invalid("stratified_kfold needs k >= 2");
  check_binary(labels, "labels");
  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == 1.0 ? pos_idx : neg_idx).push_back(i);
  }
  if (pos_idx.size() < k || neg_idx.size() < k) {
    raise_invalid("stratified_kfold needs at least k rows of each class");
  }
  Rng rng(seed);
  rng.shuffle(pos_idx);
  rng.shuffle(neg_idx);
  std::vector<std::size_t> fold(labels.size(), 0);
  for (std::size_t i = 0; i < pos_idx.size(); ++i) fold[pos_idx[i]] = i % k;
  for (std::size_t i = 0; i < neg_idx.size(); ++i) fold[neg_idx[i]] = i % k;
  return fold;
}

double median_of(std::vector<double> values) {
  if (values.empty()) raise_invalid("median of empty list");
  for (double v : values) {
    if (std::isnan(v)) return kNan;
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MetricSet median_of_runs(const std::vector<MetricSet>& runs) {
  if (runs.size() < 3) raise_invalid("median_of_runs needs at least 3 runs");
  auto collect = [&](double MetricSet::*field) {
    std::vector<double> vals;
    vals.reserve(runs.size());
    for (const MetricSet& r : runs) vals.push_back(r.*field);
    return median_of(std::move(vals));
  };
  MetricSet m;
  m.recall = collect(&MetricSet::recall);
  m.precision = collect(&MetricSet::precision);
  m.f1 = collect(&MetricSet::f1);
  m.accuracy = collect(&MetricSet::accuracy);
  m.specificity = collect(&MetricSet::specificity);
  m.ppv = collect(&MetricSet::ppv);
  m.npv = collect(&MetricSet::npv);
  m.auc = collect(&MetricSet::auc);
  m.threshold = collect(&MetricSet::threshold);
  return m;
}

}  // namespace tabguard
