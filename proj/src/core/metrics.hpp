#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/rng.hpp"

namespace tabguard {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionCounts confusion(std::span<const double> labels, std::span<const double> predictions);

// Undefined ratios (zero denominator) are reported as NaN, never silently 0.
struct MetricSet {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double specificity = 0.0;
  double ppv = 0.0;
  double npv = 0.0;
  double auc = 0.0;
  double threshold = 0.0;
};

MetricSet metric_set(const ConfusionCounts& counts, double auc, double threshold);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Trapezoidal AUC over all distinct-score thresholds; equals
// P(s+ > s-) + 0.5 P(s+ = s-). Both classes must be present.
double roc_auc(std::span<const double> scores, std::span<const double> labels,
               std::vector<RocPoint>* curve = nullptr);

inline constexpr double kRecallBandLo = 0.73;
inline constexpr double kRecallBandHi = 0.87;

// Pooled-score threshold calibration: candidates are the distinct scores,
// hard labels follow the "probability >= threshold" rule. Among candidates
// whose recall lies in [lo, hi], picks the one maximizing specificity,
// breaking ties toward the larger threshold. If the band is empty, falls
// back to the smallest recall >= lo. No recall >= lo at all is a
// calibration failure.
double calibrate_threshold(std::span<const double> pooled_scores,
                           std::span<const double> pooled_labels, double lo = kRecallBandLo,
                           double hi = kRecallBandHi);

// Stratified k-fold assignment: returns fold index per row. Per-fold
// positive counts differ by at most one from the proportional share.
std::vector<std::size_t> stratified_kfold(std::span<const double> labels, std::size_t k,
                                          std::uint64_t seed);

// Elementwise per-metric median; NaN inputs propagate to a NaN median.
MetricSet median_of_runs(const std::vector<MetricSet>& runs);

double median_of(std::vector<double> values);

}  // namespace tabguard
