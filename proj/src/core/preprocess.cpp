#include "core/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace tabguard {

PreprocessStats compute_stats(const DataTable& train) {
  if (train.rows() == 0) raise_data("cannot compute preprocessing stats on an empty table");
  PreprocessStats s;
  s.mean.resize(kFeatureCount, 0.0);
  s.stddev.resize(kFeatureCount, kStdFloor);
  s.impute.resize(kFeatureCount, 0.0);
  std::vector<double> column;
  column.reserve(train.rows());
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    column.clear();
    for (std::size_t i = 0; i < train.rows(); ++i) {
      const double v = train.features(i, j);
      if (!std::isnan(v)) column.push_back(v);
    }
    if (column.empty()) continue;
    std::sort(column.begin(), column.end());
    const std::size_t n = column.size();
    s.impute[j] = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    // Mean and variance over imputed values, matching what standardize sees.
    double sum = 0.0;
    for (double v : column) sum += v;
    sum += s.impute[j] * static_cast<double>(train.rows() - n);
    const double mean = sum / static_cast<double>(train.rows());
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    var += (s.impute[j] - mean) * (s.impute[j] - mean) * static_cast<double>(train.rows() - n);
    var /= static_cast<double>(train.rows());
    s.mean[j] = mean;
    s.stddev[j] = std::max(std::sqrt(var), kStdFloor);
  }
  return s;
}

Dataset apply_preprocess(const DataTable& table, const PreprocessStats& stats) {
  if (stats.mean.size() != kFeatureCount || stats.stddev.size() != kFeatureCount ||
      stats.impute.size() != kFeatureCount) {
    raise_invalid("preprocessing stats have wrong arity");
  }
  Dataset d;
  d.x = Matrix(table.rows(), kFeatureCount);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      double v = table.features(i, j);
      if (std::isnan(v)) v = stats.impute[j];
      d.x(i, j) = (v - stats.mean[j]) / stats.stddev[j];
    }
  }
  d.y = table.label;
  d.z = Matrix(table.rows(), kProtectedCount);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (table.age_years[i] < kAdultAge) raise_data("preprocessing saw an under-18 row");
    d.z(i, 0) = table.age_years[i] >= stats.age_cutoff ? 1.0 : 0.0;
    d.z(i, 1) = table.gender[i];
    d.z(i, 2) = binarize_ethnicity(table.ethnicity_code[i]);
  }
  return d;
}

std::vector<double> protected_column(const Dataset& data, ProtectedAttr attr) {
  std::vector<double> out(data.rows());
  const std::size_t c = static_cast<std::size_t>(attr);
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = data.z(i, c);
  return out;
}

PreprocessStats matrix_stats(const Matrix& x) {
  if (x.rows() == 0) raise_invalid("matrix_stats on an empty matrix");
  const std::size_t d = x.cols();
  PreprocessStats s;
  s.mean.resize(d, 0.0);
  s.stddev.resize(d, kStdFloor);
  s.impute.resize(d, 0.0);
  std::vector<double> column(x.rows());
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      column[i] = x(i, j);
      sum += column[i];
    }
    const double mean = sum / static_cast<double>(x.rows());
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.rows());
    std::sort(column.begin(), column.end());
    const std::size_t n = column.size();
    s.impute[j] = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    s.mean[j] = mean;
    s.stddev[j] = std::max(std::sqrt(var), kStdFloor);
  }
  return s;
}

Matrix standardize_matrix(const Matrix& x, const PreprocessStats& stats) {
  if (stats.mean.size() != x.cols()) raise_invalid("stats arity does not match matrix width");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out(i, j) = (x(i, j) - stats.mean[j]) / stats.stddev[j];
    }
  }
  return out;
}

}  // namespace tabguard
