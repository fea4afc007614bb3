#pragma once

#include "core/pipeline.hpp"

namespace tabguard {

enum class RepSource : std::uint8_t {
  raw_features = 0,
  base_encoder = 1,
  adv_encoder = 2,
  adv_per_encoder = 3,
};

const char* rep_source_name(RepSource source);

// Attackers are plain Base-architecture classifiers over a representation
// space; stats standardize that space and were fit on the attack TRAIN
// representations.
struct Attacker {
  TrainedModel model;
  RepSource trained_on = RepSource::raw_features;
};

struct AttackReport {
  ProtectedAttr attribute = ProtectedAttr::age;
  RepSource source = RepSource::raw_features;
  MetricSet metrics;
  double majority_baseline = 0.0;
};

double majority_baseline(std::span<const double> attr_labels);

enum class LeakageVerdict { is_private, leaking };

// Private iff the attacker cannot beat always-guessing-the-majority:
// accuracy <= baseline.
LeakageVerdict leakage_verdict(const AttackReport& report);

// Trains one attacker on representations -> attribute with the same CV
// threshold protocol as the main task.
Attacker train_attacker(const Matrix& reps, std::span<const double> attr, const Hyperparams& hp,
                        RepSource source, std::uint64_t seed, const CvOptions& cv);

// Evaluates an attacker against representations from `eval_source`. The
// attacker must have been trained on raw features to judge raw features,
// and on the Base encoder to judge any encoder: defended encoders are
// always judged by the Base-encoder attacker and its threshold, never by
// one trained on the defense.
AttackReport eval_attack(const Attacker& attacker, RepSource eval_source, const Matrix& reps,
                         std::span<const double> attr);

}  // namespace tabguard
