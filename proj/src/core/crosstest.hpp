#pragma once

#include "core/pipeline.hpp"

namespace tabguard {

// a2b reads "train on subgroup a, test on subgroup b". Conventions:
// gender 1 = female, ethnicity 1 = white, age 1 = old.
struct CrossTestCase {
  ProtectedAttr attribute = ProtectedAttr::gender;
  double train_value = 0.0;
  const char* mnemonic = "";
};

// The six cases: f2m, m2f, n2w, w2n, o2y, y2o.
std::span<const CrossTestCase> crosstest_cases();

const CrossTestCase& crosstest_case(const std::string& mnemonic);

struct CrossTestPair {
  CrossTestCase tc;
  MetricSet base;
  MetricSet adv;
};

// Trains Base and ADV on the case's train subgroup (threshold recalibrated
// there) and evaluates both on the complement.
CrossTestPair run_crosstest(const CrossTestCase& tc, const DataTable& combined,
                            const Hyperparams& hp, double lambda, std::uint64_t seed,
                            const CvOptions& cv);

// Signed AUC deltas (ADV - Base) per case.
std::vector<double> generalizability_gap(std::span<const CrossTestPair> pairs);

double max_abs_gap(std::span<const CrossTestPair> pairs);

}  // namespace tabguard
