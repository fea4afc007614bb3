#include "core/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace tabguard {

namespace {

const std::array<std::string, kFeatureCount> kFeatureNames = {
    "haemoglobin",
    "haematocrit",
    "mean_cell_volume",
    "white_cell_count",
    "neutrophil_count",
    "lymphocyte_count",
    "monocyte_count",
    "eosinophil_count",
    "basophil_count",
    "platelets",
    "prothrombin_time",
    "inr",
    "aptt",
    "sodium",
    "potassium",
    "creatinine",
    "urea",
    "egfr",
    "crp",
    "albumin",
    "alkaline_phosphatase",
    "alt",
    "bilirubin",
    "heart_rate",
    "respiratory_rate",
    "oxygen_saturation",
    "systolic_blood_pressure",
    "diastolic_blood_pressure",
    "temperature",
    "oxygen_flow_rate",
};

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    raise_data("unparsable number '" + cell + "' at row " + std::to_string(row) + ", column " +
               column);
  }
  return value;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_binary(const std::string& cell, std::size_t row, const std::string& column) {
  const double v = parse_number(cell, row, column);
  if (v != 0.0 && v != 1.0) {
    raise_data("column " + column + " must be 0 or 1 at row " + std::to_string(row));
  }
  return v;
}

}  // namespace

std::span<const std::string> feature_schema() {
  return {kFeatureNames.data(), kFeatureNames.size()};
}

const char* protected_attr_name(ProtectedAttr attr) {
  switch (attr) {
    case ProtectedAttr::age: return "age";
    case ProtectedAttr::gender: return "gender";
    case ProtectedAttr::ethnicity: return "ethnicity";
  }
  raise_internal("unknown protected attribute");
}

ProtectedAttr protected_attr_from_name(const std::string& name) {
  if (name == "age") return ProtectedAttr::age;
  if (name == "gender") return ProtectedAttr::gender;
  if (name == "ethnicity") return ProtectedAttr::ethnicity;
  raise_invalid("unknown protected attribute: " + name);
}

DataTable load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise_data("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) raise_data(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::unordered_map<std::string, std::size_t> known;
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) known[kFeatureNames[i]] = i;
  const std::size_t kAge = kFeatureCount, kGender = kFeatureCount + 1,
                    kEthnicity = kFeatureCount + 2, kLabel = kFeatureCount + 3;
  known["age_years"] = kAge;
  known["gender"] = kGender;
  known["ethnicity_code"] = kEthnicity;
  known["pcr_result"] = kLabel;

  std::vector<std::string> header = split_line(line);
  std::vector<std::size_t> slot(header.size());
  std::vector<bool> seen(known.size(), false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto it = known.find(header[c]);
    if (it == known.end()) raise_data(path + ": unknown column '" + header[c] + "'");
    if (seen[it->second]) raise_data(path + ": duplicate column '" + header[c] + "'");
    seen[it->second] = true;
    slot[c] = it->second;
  }
  for (const auto& [name, idx] : known) {
    if (!seen[idx]) raise_data(path + ": missing column '" + name + "'");
  }

  std::vector<std::vector<double>> feature_rows;
  DataTable t;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      raise_data(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                 " cells, expected " + std::to_string(header.size()));
    }
    std::vector<double> feats(kFeatureCount, kMissing);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t s = slot[c];
      const std::string& cell = cells[c];
      if (s < kFeatureCount) {
        if (!cell.empty()) feats[s] = parse_number(cell, row, header[c]);
      } else if (s == kAge) {
        if (cell.empty()) raise_data(path + ": empty age_years at row " + std::to_string(row));
        t.age_years.push_back(parse_number(cell, row, header[c]));
      } else if (s == kGender) {
        if (cell.empty()) raise_data(path + ": empty gender at row " + std::to_string(row));
        t.gender.push_back(parse_binary(cell, row, header[c]));
      } else if (s == kEthnicity) {
        if (cell.empty()) raise_data(path + ": empty ethnicity_code at row " + std::to_string(row));
        t.ethnicity_code.push_back(cell);
      } else {
        if (cell.empty()) raise_data(path + ": empty pcr_result at row " + std::to_string(row));
        t.label.push_back(parse_binary(cell, row, header[c]));
      }
    }
    feature_rows.push_back(std::move(feats));
  }
  t.features = Matrix(feature_rows.size(), kFeatureCount);
  for (std::size_t i = 0; i < feature_rows.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) t.features(i, j) = feature_rows[i][j];
  }
  return t;
}

void save_csv(const DataTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise_data("cannot write " + path);
  for (std::size_t j = 0; j < kFeatureCount; ++j) out << kFeatureNames[j] << ',';
  out << "age_years,gender,ethnicity_code,pcr_result\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const double v = table.features(i, j);
      if (!std::isnan(v)) out << format_number(v);
      out << ',';
    }
    out << format_number(table.age_years[i]) << ',' << (table.gender[i] == 1.0 ? '1' : '0') << ','
        << table.ethnicity_code[i] << ',' << (table.label[i] == 1.0 ? '1' : '0') << '\n';
  }
  if (!out) raise_data("write failed for " + path);
}

double binarize_age(double age_years) {
  if (age_years < kAdultAge) raise_data("age below 18 must be excluded before binarization");
  return age_years >= kAgeCutoff ? 1.0 : 0.0;
}

double binarize_ethnicity(const std::string& code) { return code == "white" ? 1.0 : 0.0; }

DataTable exclude_minors(const DataTable& table, std::vector<std::size_t>* excluded) {
  std::vector<std::size_t> keep;
  keep.reserve(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (table.age_years[i] >= kAdultAge) {
      keep.push_back(i);
    } else if (excluded != nullptr) {
      excluded->push_back(i);
    }
  }
  return take_rows(table, keep);
}

Matrix protected_matrix(const DataTable& table) {
  Matrix z(table.rows(), kProtectedCount);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    z(i, 0) = binarize_age(table.age_years[i]);
    z(i, 1) = table.gender[i];
    z(i, 2) = binarize_ethnicity(table.ethnicity_code[i]);
  }
  return z;
}

DataTable take_rows(const DataTable& table, std::span<const std::size_t> rows) {
  DataTable out;
  out.features = Matrix(rows.size(), kFeatureCount);
  out.age_years.reserve(rows.size());
  out.gender.reserve(rows.size());
  out.ethnicity_code.reserve(rows.size());
  out.label.reserve(rows.size());
  std::size_t r = 0;
  for (std::size_t i : rows) {
    if (i >= table.rows()) raise_internal("take_rows index out of range");
    for (std::size_t j = 0; j < kFeatureCount; ++j) out.features(r, j) = table.features(i, j);
    out.age_years.push_back(table.age_years[i]);
    out.gender.push_back(table.gender[i]);
    out.ethnicity_code.push_back(table.ethnicity_code[i]);
    out.label.push_back(table.label[i]);
    ++r;
  }
  return out;
}

DataTable filter_subgroup(const DataTable& table, ProtectedAttr attr, double value) {
  if (value != 0.0 && value != 1.0) raise_invalid("subgroup value must be 0 or 1");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    double v = 0.0;
    switch (attr) {
      case ProtectedAttr::age: v = binarize_age(table.age_years[i]); break;
      case ProtectedAttr::gender: v = table.gender[i]; break;
      case ProtectedAttr::ethnicity: v = binarize_ethnicity(table.ethnicity_code[i]); break;
    }
    if (v == value) keep.push_back(i);
  }
  if (keep.empty()) {
    raise_data(std::string("empty subgroup: ") + protected_attr_name(attr) + "=" +
               (value == 1.0 ? "1" : "0"));
  }
  return take_rows(table, keep);
}

DataTable subsample_balance(const DataTable& table, double target_prevalence, std::uint64_t seed) {
  if (!(target_prevalence > 0.0 && target_prevalence < 1.0)) {
    raise_invalid("target prevalence must lie in (0, 1)");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    (table.label[i] == 1.0 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) raise_data("subsample needs both classes");
  if (pos.size() > neg.size()) raise_invalid("subsample expects positives to be the minority");
  const double want = static_cast<double>(pos.size()) * (1.0 - target_prevalence) /
                      target_prevalence;
  const std::size_t n_neg = static_cast<std::size_t>(std::llround(want));
  if (n_neg > neg.size()) raise_invalid("target prevalence unreachable");
  Rng rng(seed);
  rng.shuffle(neg);
  neg.resize(n_neg);
  std::vector<std::size_t> keep = pos;
  keep.insert(keep.end(), neg.begin(), neg.end());
  std::sort(keep.begin(), keep.end());
  return take_rows(table, keep);
}

std::pair<DataTable, DataTable> stratified_split(const DataTable& table, double test_fraction,
                                                 std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    raise_invalid("test fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    (table.label[i] == 1.0 ? pos : neg).push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  const std::size_t test_pos = static_cast<std::size_t>(
      std::llround(static_cast<double>(pos.size()) * test_fraction));
  const std::size_t test_neg = static_cast<std::size_t>(
      std::llround(static_cast<double>(neg.size()) * test_fraction));
  std::vector<std::size_t> test_idx(pos.begin(), pos.begin() + test_pos);
  test_idx.insert(test_idx.end(), neg.begin(), neg.begin() + test_neg);
  std::vector<std::size_t> train_idx(pos.begin() + test_pos, pos.end());
  train_idx.insert(train_idx.end(), neg.begin() + test_neg, neg.end());
  std::sort(test_idx.begin(), test_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  return {take_rows(table, train_idx), take_rows(table, test_idx)};
}

DataTable concat_tables(const DataTable& a, const DataTable& b) {
  DataTable out;
  out.features = Matrix(a.rows() + b.rows(), kFeatureCount);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) out.features(i, j) = a.features(i, j);
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      out.features(a.rows() + i, j) = b.features(i, j);
    }
  }
  auto append = [](auto& dst, const auto& x, const auto& y) {
    dst = x;
    dst.insert(dst.end(), y.begin(), y.end());
  };
  append(out.age_years, a.age_years, b.age_years);
  append(out.gender, a.gender, b.gender);
  append(out.ethnicity_code, a.ethnicity_code, b.ethnicity_code);
  append(out.label, a.label, b.label);
  return out;
}

}  // namespace tabguard
