#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/attack.hpp"
#include "core/crosstest.hpp"
#include "core/metrics.hpp"

namespace tabguard {

// A cell is either a label or a number; numbers render exactly in CSV and
// fixed-precision in text.
struct ReportCell {
  std::string text;
  double value = 0.0;
  bool numeric = false;
};

ReportCell label_cell(std::string text);
ReportCell num_cell(double value);

struct ReportTable {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<ReportCell>> rows;
};

// Machine form: header row plus one line per row, comma separated. Values
// are shortest-round-trip decimals; NaN renders as "n/a".
std::string to_csv(const ReportTable& table);

// Human form: title, aligned columns, 4 decimal places.
std::string to_text(const ReportTable& table);

// "Base", "ADV_per", "ADV" display names.
std::string model_display_name(ModelKind kind);

// "Age", "Gender", "Ethnicity" display names.
std::string attr_display_name(ProtectedAttr attr);

// Model / Recall ... AUC / Threshold; callers pass rows in Base, ADV_per,
// ADV order.
ReportTable main_results_table(const std::vector<std::pair<std::string, MetricSet>>& rows);

// Predicted Attribute / Recall ... AUC, one row per attribute.
ReportTable attack_table(const std::string& title, const std::vector<AttackReport>& reports);

// Protected attribute / TRAIN / TEST majority-class fractions.
ReportTable baselines_table(const std::vector<double>& train_baselines,
                            const std::vector<double>& test_baselines);

// Cross-test / Model / Recall ... AUC; two rows (Base, ADV) per case.
ReportTable crosstest_table(const std::vector<CrossTestPair>& pairs);

// Model / Recall ... AUC for one external holdout.
ReportTable external_table(const std::string& holdout_name,
                           const std::vector<std::pair<std::string, MetricSet>>& rows);

}  // namespace tabguard
