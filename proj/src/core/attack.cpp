#include "core/attack.hpp"

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace tabguard {

const char* rep_source_name(RepSource source) {
  switch (source) {
    case RepSource::raw_features: return "raw_features";
    case RepSource::base_encoder: return "base_encoder";
    case RepSource::adv_encoder: return "adv_encoder";
    case RepSource::adv_per_encoder: return "adv_per_encoder";
  }
  raise_internal("unknown representation source");
}

double majority_baseline(std::span<const double> attr_labels) {
  if (attr_labels.empty()) raise_invalid("majority baseline of an empty set");
  std::size_t ones = 0;
  for (double v : attr_labels) {
    if (v != 0.0 && v != 1.0) raise_invalid("attribute labels must be 0 or 1");
    if (v == 1.0) ++ones;
  }
  const double frac = static_cast<double>(ones) / static_cast<double>(attr_labels.size());
  return std::max(frac, 1.0 - frac);
}

LeakageVerdict leakage_verdict(const AttackReport& report) {
  return report.metrics.accuracy <= report.majority_baseline ? LeakageVerdict::is_private
                                                             : LeakageVerdict::leaking;
}

Attacker train_attacker(const Matrix& reps, std::span<const double> attr, const Hyperparams& hp,
                        RepSource source, std::uint64_t seed, const CvOptions& cv) {
  const std::size_t n = reps.rows();
  if (attr.size() != n) raise_invalid("attribute length does not match representations");
  bool saw0 = false, saw1 = false;
  for (double v : attr) {
    if (v == 0.0) saw0 = true;
    if (v == 1.0) saw1 = true;
  }
  if (!saw0 || !saw1) raise_data("attribute column is constant, attacker labels degenerate");

  const std::vector<double> labels(attr.begin(), attr.end());
  const std::vector<std::size_t> folds =
      stratified_kfold(labels, cv.folds, derive_seed(seed, "folds"));

  std::vector<double> pooled(n, 0.0);
  parallel_for(cv.folds, cv.threads, [&](std::size_t f) {
    std::vector<std::size_t> fit_rows, held_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (folds[i] == f ? held_rows : fit_rows).push_back(i);
    }
    Matrix fit_reps(fit_rows.size(), reps.cols());
    for (std::size_t r = 0; r < fit_rows.size(); ++r) {
      for (std::size_t c = 0; c < reps.cols(); ++c) fit_reps(r, c) = reps(fit_rows[r], c);
    }
    std::vector<double> fit_attr(fit_rows.size());
    for (std::size_t r = 0; r < fit_rows.size(); ++r) fit_attr[r] = labels[fit_rows[r]];
    const PreprocessStats stats = matrix_stats(fit_reps);
    const TrainedModel fold_model = train_base(standardize_matrix(fit_reps, stats), fit_attr, hp,
                                               derive_seed(seed, "fold", f));
    Matrix held_reps(held_rows.size(), reps.cols());
    for (std::size_t r = 0; r < held_rows.size(); ++r) {
      for (std::size_t c = 0; c < reps.cols(); ++c) held_reps(r, c) = reps(held_rows[r], c);
    }
    const std::vector<double> probs =
        predict_proba(fold_model, standardize_matrix(held_reps, stats));
    for (std::size_t r = 0; r < held_rows.size(); ++r) pooled[held_rows[r]] = probs[r];
  });

  const double threshold = calibrate_threshold(pooled, labels, cv.recall_lo, cv.recall_hi);

  Attacker attacker;
  attacker.trained_on = source;
  const PreprocessStats stats = matrix_stats(reps);
  attacker.model = train_base(standardize_matrix(reps, stats), labels, hp,
                              derive_seed(seed, "fit"));
  attacker.model.stats = stats;
  attacker.model.threshold = threshold;
  attacker.model.calibrated = true;
  attacker.model.seed = seed;
  return attacker;
}

AttackReport eval_attack(const Attacker& attacker, RepSource eval_source, const Matrix& reps,
                         std::span<const double> attr) {
  const bool ok = (eval_source == RepSource::raw_features &&
                   attacker.trained_on == RepSource::raw_features) ||
                  (eval_source != RepSource::raw_features &&
                   attacker.trained_on == RepSource::base_encoder);
  if (!ok) {
    raise_protocol(std::string("attacker trained on ") + rep_source_name(attacker.trained_on) +
                   " cannot judge " + rep_source_name(eval_source));
  }
  if (!attacker.model.calibrated) raise_protocol("attacker has no calibrated threshold");
  if (attr.size() != reps.rows()) raise_invalid("attribute length does not match representations");

  const Matrix x = standardize_matrix(reps, attacker.model.stats);
  const std::vector<double> probs = predict_proba(attacker.model, x);
  const std::vector<double> labels(attr.begin(), attr.end());

  AttackReport report;
  report.source = eval_source;
  report.metrics = metrics_from_scores(probs, labels, attacker.model.threshold);
  report.majority_baseline = majority_baseline(attr);
  return report;
}

}  // namespace tabguard
