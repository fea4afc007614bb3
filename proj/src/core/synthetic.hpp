#pragma once

#include <array>
#include <cstdint>

#include "core/dataset.hpp"

namespace tabguard {

// Feature-index blocks shifted by each planted signal:
//   age      -> features [0, 6)
//   gender   -> features [6, 12)
//   ethnicity-> features [12, 18)
//   label    -> features [18, 26)
//   noise    -> features [26, 30), never shifted
inline constexpr std::size_t kAgeBlockLo = 0, kAgeBlockHi = 6;
inline constexpr std::size_t kGenderBlockLo = 6, kGenderBlockHi = 12;
inline constexpr std::size_t kEthnicityBlockLo = 12, kEthnicityBlockHi = 18;
inline constexpr std::size_t kLabelBlockLo = 18, kLabelBlockHi = 26;

struct SyntheticSpec {
  std::size_t n_rows = 10000;
  double prevalence = 0.5;
  // P(attribute = 1) for age, gender, ethnicity; all above 0.5 so the
  // majority class is the 1 side and the majority fraction equals the prior.
  std::array<double, kProtectedCount> attr_priors = {0.53, 0.54, 0.68};
  // Mean shift added to the attribute's feature block when the attribute
  // is 1; zero removes the planted leakage entirely.
  std::array<double, kProtectedCount> leakage_strength = {1.0, 1.0, 1.0};
  // Mean shift added to the label block for positive rows.
  double label_signal = 0.75;
  std::uint64_t seed = 1;
};

void validate_synthetic(const SyntheticSpec& spec);

// Unit-variance Gaussian features with the mean shifts above; the positive
// count is exactly round(prevalence * n_rows); protected attributes are
// drawn independently of the label.
DataTable generate_synthetic(const SyntheticSpec& spec);

}  // namespace tabguard
