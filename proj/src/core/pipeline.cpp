#include "core/pipeline.hpp"

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace tabguard {

TrainedModel train_one(const TrainSpec& spec, const Dataset& data, std::uint64_t seed) {
  switch (spec.kind) {
    case ModelKind::base: return train_base(data.x, data.y, spec.hp, seed);
    case ModelKind::adv: return train_adv(data.x, data.y, data.z, spec.hp, spec.lambda, seed);
    case ModelKind::adv_per: return train_adv_per(data.x, data.y, spec.hp, spec.fgsm, seed);
  }
  raise_internal("unknown model kind");
}

TrainedModel fit_with_cv(const TrainSpec& spec, const DataTable& train_table, std::uint64_t seed,
                         const CvOptions& cv) {
  const std::size_t n = train_table.rows();
  if (n == 0) raise_data("empty training table");
  const std::vector<std::size_t> folds =
      stratified_kfold(train_table.label, cv.folds, derive_seed(seed, "folds"));

  std::vector<double> pooled_scores(n, 0.0);
  parallel_for(cv.folds, cv.threads, [&](std::size_t f) {
    std::vector<std::size_t> fit_rows, held_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (folds[i] == f ? held_rows : fit_rows).push_back(i);
    }
    const DataTable sub = take_rows(train_table, fit_rows);
    const PreprocessStats stats = compute_stats(sub);
    const Dataset fit_data = apply_preprocess(sub, stats);
    const TrainedModel fold_model = train_one(spec, fit_data, derive_seed(seed, "fold", f));
    const DataTable held = take_rows(train_table, held_rows);
    const Dataset held_data = apply_preprocess(held, stats);
    const std::vector<double> probs = predict_proba(fold_model, held_data.x);
    for (std::size_t r = 0; r < held_rows.size(); ++r) pooled_scores[held_rows[r]] = probs[r];
  });

  const double threshold =
      calibrate_threshold(pooled_scores, train_table.label, cv.recall_lo, cv.recall_hi);

  const PreprocessStats stats = compute_stats(train_table);
  const Dataset full = apply_preprocess(train_table, stats);
  TrainedModel model = train_one(spec, full, derive_seed(seed, "fit"));
  model.stats = stats;
  model.threshold = threshold;
  model.calibrated = true;
  model.seed = seed;
  return model;
}

MetricSet metrics_from_scores(std::span<const double> probs, std::span<const double> labels,
                              double threshold) {
  std::vector<double> preds(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) preds[i] = probs[i] >= threshold ? 1.0 : 0.0;
  const ConfusionCounts counts = confusion(labels, preds);
  const double auc = roc_auc(probs, labels);
  return metric_set(counts, auc, threshold);
}

MetricSet evaluate_model(const TrainedModel& model, const DataTable& test_table) {
  if (!model.calibrated) raise_protocol("evaluating an uncalibrated model");
  const Dataset data = apply_preprocess(test_table, model.stats);
  const std::vector<double> probs = predict_proba(model, data.x);
  return metrics_from_scores(probs, data.y, model.threshold);
}

}  // namespace tabguard
