#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace tabguard {

inline constexpr std::size_t kFeatureCount = 30;
inline constexpr std::size_t kProtectedCount = 3;
inline constexpr double kAgeCutoff = 64.0;
inline constexpr double kAdultAge = 18.0;

// Canonical feature column names: 23 blood panel measurements followed by
// 7 vital signs.
std::span<const std::string> feature_schema();

enum class ProtectedAttr : std::size_t { age = 0, gender = 1, ethnicity = 2 };

const char* protected_attr_name(ProtectedAttr attr);
ProtectedAttr protected_attr_from_name(const std::string& name);

// One loaded table: clinical features (NaN marks a missing cell) plus the
// raw demographic columns and the PCR label.
struct DataTable {
  Matrix features;  // n x kFeatureCount
  std::vector<double> age_years;
  std::vector<double> gender;  // 0/1, 1 = female
  std::vector<std::string> ethnicity_code;
  std::vector<double> label;  // 0/1

  std::size_t rows() const { return label.size(); }
};

DataTable load_csv(const std::string& path);
void save_csv(const DataTable& table, const std::string& path);

// Binarization rules: age >= 64 -> 1 (old), ethnicity code "white" -> 1,
// anything else (including not-stated codes) -> 0; gender passes through.
double binarize_age(double age_years);
double binarize_ethnicity(const std::string& code);

// Rows younger than 18 are excluded; their original indices are appended to
// `excluded` when provided.
DataTable exclude_minors(const DataTable& table, std::vector<std::size_t>* excluded = nullptr);

// n x 3 binary matrix in ProtectedAttr column order.
Matrix protected_matrix(const DataTable& table);

DataTable take_rows(const DataTable& table, std::span<const std::size_t> rows);

DataTable filter_subgroup(const DataTable& table, ProtectedAttr attr, double value);

DataTable subsample_balance(const DataTable& table, double target_prevalence, std::uint64_t seed);

// Label-stratified split; second element holds ~test_fraction of the rows.
std::pair<DataTable, DataTable> stratified_split(const DataTable& table, double test_fraction,
                                                 std::uint64_t seed);

DataTable concat_tables(const DataTable& a, const DataTable& b);

}  // namespace tabguard
