#include "experiment/report.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "experiment/format.hpp"

namespace tabguard {

namespace {

const std::vector<std::string> kMetricColumns = {
    "Recall", "Precision", "F1-Score", "Accuracy", "Specificity", "PPV", "NPV", "AUC"};

void push_metrics(std::vector<ReportCell>& row, const MetricSet& m) {
  row.push_back(num_cell(m.recall));
  row.push_back(num_cell(m.precision));
  row.push_back(num_cell(m.f1));
  row.push_back(num_cell(m.accuracy));
  row.push_back(num_cell(m.specificity));
  row.push_back(num_cell(m.ppv));
  row.push_back(num_cell(m.npv));
  row.push_back(num_cell(m.auc));
}

std::vector<std::string> with_leading(std::initializer_list<std::string> lead,
                                      bool with_threshold = false) {
  std::vector<std::string> header(lead);
  header.insert(header.end(), kMetricColumns.begin(), kMetricColumns.end());
  if (with_threshold) header.push_back("Threshold");
  return header;
}

}  // namespace

ReportCell label_cell(std::string text) {
  ReportCell c;
  c.text = std::move(text);
  return c;
}

ReportCell num_cell(double value) {
  ReportCell c;
  c.value = value;
  c.numeric = true;
  return c;
}

std::string to_csv(const ReportTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) raise_internal("report row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i].numeric ? format_metric(row[i].value) : row[i].text;
    }
    out += '\n';
  }
  return out;
}

std::string to_text(const ReportTable& table) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(table.header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line;
    for (const auto& cell : row) {
      line.push_back(cell.numeric ? format_fixed(cell.value, 4) : cell.text);
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(table.header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  if (!table.title.empty()) out += table.title + "\n";
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += "  ";
      out += line[i];
      if (i + 1 < line.size()) out.append(width[i] - line[i].size(), ' ');
    }
    out += '\n';
  }
  return out;
}

std::string model_display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::base:
      return "Base";
    case ModelKind::adv:
      return "ADV";
    case ModelKind::adv_per:
      return "ADV_per";
  }
  raise_internal("model_display_name: bad kind");
}

std::string attr_display_name(ProtectedAttr attr) {
  switch (attr) {
    case ProtectedAttr::age:
      return "Age";
    case ProtectedAttr::gender:
      return "Gender";
    case ProtectedAttr::ethnicity:
      return "Ethnicity";
  }
  raise_internal("attr_display_name: bad attribute");
}

ReportTable main_results_table(const std::vector<std::pair<std::string, MetricSet>>& rows) {
  ReportTable t;
  t.title = "Main task results (10-fold CV threshold, TEST metrics)";
  t.header = with_leading({"Model"}, true);
  for (const auto& [name, m] : rows) {
    std::vector<ReportCell> row{label_cell(name)};
    push_metrics(row, m);
    row.push_back(num_cell(m.threshold));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable attack_table(const std::string& title, const std::vector<AttackReport>& reports) {
  ReportTable t;
  t.title = title;
  t.header = with_leading({"Predicted Attribute"});
  for (const auto& report : reports) {
    std::vector<ReportCell> row{label_cell(attr_display_name(report.attribute))};
    push_metrics(row, report.metrics);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable baselines_table(const std::vector<double>& train_baselines,
                            const std::vector<double>& test_baselines) {
  if (train_baselines.size() != kProtectedCount || test_baselines.size() != kProtectedCount) {
    raise_internal("baselines_table: expected one baseline per protected attribute");
  }
  ReportTable t;
  t.title = "Majority-class fraction per protected attribute";
  t.header = {"Protected attribute", "TRAIN", "TEST"};
  for (std::size_t a = 0; a < kProtectedCount; ++a) {
    t.rows.push_back({label_cell(attr_display_name(static_cast<ProtectedAttr>(a))),
                      num_cell(train_baselines[a]), num_cell(test_baselines[a])});
  }
  return t;
}

ReportTable crosstest_table(const std::vector<CrossTestPair>& pairs) {
  ReportTable t;
  t.title = "Demographic cross-tests";
  t.header = with_leading({"Cross-test", "Model"});
  for (const auto& pair : pairs) {
    std::vector<ReportCell> base_row{label_cell(pair.tc.mnemonic), label_cell("Base")};
    push_metrics(base_row, pair.base);
    t.rows.push_back(std::move(base_row));
    std::vector<ReportCell> adv_row{label_cell(pair.tc.mnemonic), label_cell("ADV")};
    push_metrics(adv_row, pair.adv);
    t.rows.push_back(std::move(adv_row));
  }
  return t;
}

ReportTable external_table(const std::string& holdout_name,
                           const std::vector<std::pair<std::string, MetricSet>>& rows) {
  ReportTable t;
  t.title = "External validation on holdout " + holdout_name;
  t.header = with_leading({"Model"});
  for (const auto& [name, m] : rows) {
    std::vector<ReportCell> row{label_cell(name)};
    push_metrics(row, m);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace tabguard
