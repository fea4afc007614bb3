#include "core/synthetic.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace tabguard {

void validate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_rows == 0) raise_invalid("synthetic spec needs n_rows > 0");
  if (!(spec.prevalence > 0.0 && spec.prevalence < 1.0)) {
    raise_invalid("synthetic prevalence must lie in (0, 1)");
  }
  for (double p : spec.attr_priors) {
    if (!(p > 0.0 && p < 1.0)) raise_invalid("synthetic attribute priors must lie in (0, 1)");
  }
  for (double s : spec.leakage_strength) {
    if (!(s >= 0.0)) raise_invalid("synthetic leakage strength must be nonnegative");
  }
  if (!(spec.label_signal >= 0.0)) raise_invalid("synthetic label signal must be nonnegative");
}

DataTable generate_synthetic(const SyntheticSpec& spec) {
  validate_synthetic(spec);
  const std::size_t n = spec.n_rows;
  Rng rng(spec.seed);

  const std::size_t n_pos = static_cast<std::size_t>(
      std::llround(spec.prevalence * static_cast<double>(n)));
  if (n_pos == 0 || n_pos == n) raise_invalid("prevalence leaves one class empty at this n_rows");
  std::vector<double> labels(n, 0.0);
  for (std::size_t i = 0; i < n_pos; ++i) labels[i] = 1.0;
  rng.shuffle(labels);

  DataTable t;
  t.features = Matrix(n, kFeatureCount);
  t.age_years.resize(n);
  t.gender.resize(n);
  t.ethnicity_code.resize(n);
  t.label = labels;

  for (std::size_t i = 0; i < n; ++i) {
    const double z_age = rng.bernoulli(spec.attr_priors[0]) ? 1.0 : 0.0;
    const double z_gender = rng.bernoulli(spec.attr_priors[1]) ? 1.0 : 0.0;
    const double z_eth = rng.bernoulli(spec.attr_priors[2]) ? 1.0 : 0.0;
    t.age_years[i] = z_age == 1.0 ? rng.uniform(kAgeCutoff, 90.0)
                                  : rng.uniform(kAdultAge, kAgeCutoff);
    t.gender[i] = z_gender;
    t.ethnicity_code[i] = z_eth == 1.0 ? "white" : "nonwhite";
    const double y = labels[i];
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      double shift = 0.0;
      if (j >= kAgeBlockLo && j < kAgeBlockHi) {
        shift = spec.leakage_strength[0] * z_age;
      } else if (j >= kGenderBlockLo && j < kGenderBlockHi) {
        shift = spec.leakage_strength[1] * z_gender;
      } else if (j >= kEthnicityBlockLo && j < kEthnicityBlockHi) {
        shift = spec.leakage_strength[2] * z_eth;
      } else if (j >= kLabelBlockLo && j < kLabelBlockHi) {
        shift = spec.label_signal * y;
      }
      t.features(i, j) = rng.normal() + shift;
    }
  }
  return t;
}

}  // namespace tabguard
