#include "core/crosstest.hpp"

#include <array>
#include <cmath>

#include "core/error.hpp"

namespace tabguard {

namespace {

constexpr std::array<CrossTestCase, 6> kCases = {{
    {ProtectedAttr::gender, 1.0, "f2m"},
    {ProtectedAttr::gender, 0.0, "m2f"},
    {ProtectedAttr::ethnicity, 0.0, "n2w"},
    {ProtectedAttr::ethnicity, 1.0, "w2n"},
    {ProtectedAttr::age, 1.0, "o2y"},
    {ProtectedAttr::age, 0.0, "y2o"},
}};

void check_both_classes(const DataTable& table, const char* which, const char* mnemonic) {
  std::size_t pos = 0, neg = 0;
  for (double y : table.label) y == 1.0 ? ++pos : ++neg;
  if (pos == 0 || neg == 0) {
    raise_data(std::string(mnemonic) + ": " + which + " subgroup lacks a label class");
  }
}

}  // namespace

std::span<const CrossTestCase> crosstest_cases() { return {kCases.data(), kCases.size()}; }

const CrossTestCase& crosstest_case(const std::string& mnemonic) {
  for (const CrossTestCase& tc : kCases) {
    if (mnemonic == tc.mnemonic) return tc;
  }
  raise_invalid("unknown cross-test mnemonic: " + mnemonic);
}

CrossTestPair run_crosstest(const CrossTestCase& tc, const DataTable& combined,
                            const Hyperparams& hp, double lambda, std::uint64_t seed,
                            const CvOptions& cv) {
  const DataTable train_sub = filter_subgroup(combined, tc.attribute, tc.train_value);
  const DataTable test_sub = filter_subgroup(combined, tc.attribute, 1.0 - tc.train_value);
  check_both_classes(train_sub, "train", tc.mnemonic);
  check_both_classes(test_sub, "test", tc.mnemonic);

  CrossTestPair pair;
  pair.tc = tc;

  TrainSpec base_spec;
  base_spec.kind = ModelKind::base;
  base_spec.hp = hp;
  const TrainedModel base = fit_with_cv(
      base_spec, train_sub, derive_seed(seed, std::string(tc.mnemonic) + "-base"), cv);
  pair.base = evaluate_model(base, test_sub);

  TrainSpec adv_spec;
  adv_spec.kind = ModelKind::adv;
  adv_spec.hp = hp;
  adv_spec.lambda = lambda;
  const TrainedModel adv = fit_with_cv(
      adv_spec, train_sub, derive_seed(seed, std::string(tc.mnemonic) + "-adv"), cv);
  pair.adv = evaluate_model(adv, test_sub);
  return pair;
}

std::vector<double> generalizability_gap(std::span<const CrossTestPair> pairs) {
  std::vector<double> deltas;
  deltas.reserve(pairs.size());
  for (const CrossTestPair& p : pairs) deltas.push_back(p.adv.auc - p.base.auc);
  return deltas;
}

double max_abs_gap(std::span<const CrossTestPair> pairs) {
  double best = 0.0;
  for (const CrossTestPair& p : pairs) best = std::max(best, std::abs(p.adv.auc - p.base.auc));
  return best;
}

}  // namespace tabguard
