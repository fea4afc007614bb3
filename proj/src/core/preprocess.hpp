#pragma once

#include <vector>

#include "core/dataset.hpp"

namespace tabguard {

inline constexpr double kStdFloor = 1e-8;

// Per-feature TRAIN statistics applied to every later transform; stored in
// every saved model so inference never recomputes them.
struct PreprocessStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // floored at kStdFloor
  std::vector<double> impute;  // TRAIN median per feature
  double age_cutoff = kAgeCutoff;
};

PreprocessStats compute_stats(const DataTable& train);

// Fully numeric view ready for training: imputed, standardized features,
// labels, and the binary protected matrix.
struct Dataset {
  Matrix x;
  std::vector<double> y;
  Matrix z;

  std::size_t rows() const { return y.size(); }
};

Dataset apply_preprocess(const DataTable& table, const PreprocessStats& stats);

std::vector<double> protected_column(const Dataset& data, ProtectedAttr attr);

// Column statistics for an arbitrary numeric matrix (no missing values),
// used to standardize representation spaces.
PreprocessStats matrix_stats(const Matrix& x);
Matrix standardize_matrix(const Matrix& x, const PreprocessStats& stats);

}  // namespace tabguard
