#pragma once

#include "core/dataset.hpp"
#include "core/metrics.hpp"
#include "core/models.hpp"
#include "core/preprocess.hpp"

namespace tabguard {

struct CvOptions {
  std::size_t folds = 10;
  double recall_lo = kRecallBandLo;
  double recall_hi = kRecallBandHi;
  int threads = 1;
};

// Everything needed to train one model of a given kind.
struct TrainSpec {
  ModelKind kind = ModelKind::base;
  Hyperparams hp{};
  double lambda = 2.0;
  FgsmConfig fgsm{};
};

TrainedModel train_one(const TrainSpec& spec, const Dataset& data, std::uint64_t seed);

// The per-seed protocol: stratified CV over TRAIN produces pooled
// out-of-fold scores, the threshold is calibrated on those, and the final
// model is fit on all of TRAIN with TRAIN-wide preprocessing statistics.
// Fold models use fold-local statistics so no held-out row leaks into them.
TrainedModel fit_with_cv(const TrainSpec& spec, const DataTable& train_table, std::uint64_t seed,
                         const CvOptions& cv);

// TEST metrics under the model's stored statistics and threshold.
MetricSet evaluate_model(const TrainedModel& model, const DataTable& test_table);

MetricSet metrics_from_scores(std::span<const double> probs, std::span<const double> labels,
                              double threshold);

}  // namespace tabguard
