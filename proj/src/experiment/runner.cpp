#include "experiment/runner.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>

#include "core/attack.hpp"
#include "core/crosstest.hpp"
#include "core/error.hpp"
#include "core/model_io.hpp"
#include "core/parallel.hpp"
#include "experiment/format.hpp"
#include "experiment/fsutil.hpp"
#include "experiment/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tabguard {

namespace {

const ModelKind kReportOrder[] = {ModelKind::base, ModelKind::adv_per, ModelKind::adv};

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json num_or_null(double v) { return std::isnan(v) ? json() : json(v); }

double num_from(const json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

json base_manifest(const char* command, const ExperimentConfig& cfg) {
  json doc;
  doc["command"] = command;
  doc["created_utc"] = utc_timestamp();
  doc["config"] = config_to_map(cfg);
  doc["seeds"] = cfg.run.seeds;
  return doc;
}

void write_manifest(const json& doc, const std::string& path) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

void write_table(const OutPaths& paths, const std::string& name, const ReportTable& table,
                 json& doc) {
  write_file_atomic(paths.report_csv(name), to_csv(table));
  write_file_atomic(paths.report_txt(name), to_text(table));
  doc["artifacts"]["reports"][name + "_csv"] = paths.report_csv(name);
  doc["artifacts"]["reports"][name + "_txt"] = paths.report_txt(name);
}

void save_csv_atomic(const DataTable& table, const std::string& path) {
  fs::path target(path);
  if (target.has_parent_path()) ensure_dir(target.parent_path().string());
  const std::string tmp = path + ".tmp";
  save_csv(table, tmp);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) raise_data("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

void save_model_atomic(const TrainedModel& model, const std::string& path) {
  fs::path target(path);
  if (target.has_parent_path()) ensure_dir(target.parent_path().string());
  const std::string tmp = path + ".tmp";
  save_model(model, tmp);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) raise_data("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

DataTable load_table_checked(const std::string& path, const char* hint) {
  if (!file_exists(path)) raise_data(std::string("missing data file ") + path + "; " + hint);
  return exclude_minors(load_csv(path));
}

std::pair<DataTable, DataTable> resolve_train_test(const ExperimentConfig& cfg,
                                                   const OutPaths& paths) {
  if (cfg.data.source == "csv") {
    return {load_table_checked(cfg.data.train_csv, "check [data] train_csv"),
            load_table_checked(cfg.data.test_csv, "check [data] test_csv")};
  }
  const char* hint = "run the gen-data command first";
  return {load_table_checked(paths.train_csv(), hint), load_table_checked(paths.test_csv(), hint)};
}

MetricSet aggregate_metrics(const std::vector<MetricSet>& runs) {
  if (runs.empty()) raise_internal("aggregating zero runs");
  if (runs.size() >= 3) return median_of_runs(runs);
  if (runs.size() == 1) return runs[0];
  auto mid = [&](double MetricSet::*field) {
    return median_of({runs[0].*field, runs[1].*field});
  };
  MetricSet m;
  m.recall = mid(&MetricSet::recall);
  m.precision = mid(&MetricSet::precision);
  m.f1 = mid(&MetricSet::f1);
  m.accuracy = mid(&MetricSet::accuracy);
  m.specificity = mid(&MetricSet::specificity);
  m.ppv = mid(&MetricSet::ppv);
  m.npv = mid(&MetricSet::npv);
  m.auc = mid(&MetricSet::auc);
  m.threshold = mid(&MetricSet::threshold);
  return m;
}

Matrix imputed_features(const DataTable& table, const PreprocessStats& stats) {
  Matrix x = table.features;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (std::isnan(x(r, c))) x(r, c) = stats.impute[c];
    }
  }
  return x;
}

std::vector<double> matrix_column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, c);
  return out;
}

void require_model_files(const OutPaths& paths, std::span<const ModelKind> kinds,
                         std::span<const std::uint64_t> seeds) {
  for (ModelKind kind : kinds) {
    for (std::uint64_t seed : seeds) {
      const std::string path = paths.model_file(kind, seed);
      if (!file_exists(path)) {
        raise_data("missing model file " + path + "; run the train command first");
      }
    }
  }
}

json describe_table(const DataTable& table, const std::string& path) {
  std::size_t pos = 0;
  for (double y : table.label) {
    if (y == 1.0) ++pos;
  }
  json f;
  f["path"] = path;
  f["rows"] = table.rows();
  f["positives"] = pos;
  f["prevalence"] =
      table.rows() == 0 ? 0.0 : static_cast<double>(pos) / static_cast<double>(table.rows());
  return f;
}

}  // namespace

std::string holdout_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return std::to_string(i);
}

std::string OutPaths::holdout_csv(std::size_t i) const {
  return data_dir() + "/holdout_" + holdout_name(i) + ".csv";
}

std::string OutPaths::model_file(ModelKind kind, std::uint64_t seed) const {
  return models_dir() + "/" + model_kind_name(kind) + "_seed" + std::to_string(seed) + ".tgmd";
}

json metrics_to_json(const MetricSet& m) {
  json j;
  j["recall"] = num_or_null(m.recall);
  j["precision"] = num_or_null(m.precision);
  j["f1"] = num_or_null(m.f1);
  j["accuracy"] = num_or_null(m.accuracy);
  j["specificity"] = num_or_null(m.specificity);
  j["ppv"] = num_or_null(m.ppv);
  j["npv"] = num_or_null(m.npv);
  j["auc"] = num_or_null(m.auc);
  j["threshold"] = num_or_null(m.threshold);
  return j;
}

MetricSet metrics_from_json(const json& j) {
  MetricSet m;
  m.recall = num_from(j.at("recall"));
  m.precision = num_from(j.at("precision"));
  m.f1 = num_from(j.at("f1"));
  m.accuracy = num_from(j.at("accuracy"));
  m.specificity = num_from(j.at("specificity"));
  m.ppv = num_from(j.at("ppv"));
  m.npv = num_from(j.at("npv"));
  m.auc = num_from(j.at("auc"));
  m.threshold = num_from(j.at("threshold"));
  return m;
}

CommandResult cmd_gen_data(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const OutPaths paths{cfg.run.out_dir};
  ensure_dir(paths.data_dir());

  const SyntheticSpec& spec = cfg.data.synthetic;
  const DataTable table = generate_synthetic(spec);
  const auto [train, test] =
      stratified_split(table, cfg.data.test_fraction, derive_seed(spec.seed, "split"));
  save_csv_atomic(train, paths.train_csv());
  save_csv_atomic(test, paths.test_csv());

  json doc = base_manifest("gen-data", cfg);
  doc["files"]["train"] = describe_table(train, paths.train_csv());
  doc["files"]["test"] = describe_table(test, paths.test_csv());

  for (std::size_t i = 0; i < cfg.external.holdout_prevalences.size(); ++i) {
    SyntheticSpec hs = spec;
    hs.n_rows = cfg.external.holdout_rows;
    hs.prevalence = cfg.external.holdout_prevalences[i];
    hs.seed = derive_seed(spec.seed, "holdout", i);
    validate_synthetic(hs);
    const DataTable holdout = generate_synthetic(hs);
    save_csv_atomic(holdout, paths.holdout_csv(i));
    doc["files"]["holdout_" + holdout_name(i)] = describe_table(holdout, paths.holdout_csv(i));
  }

  write_file_atomic(paths.config_echo(), render_config(cfg));
  doc["artifacts"]["config_echo"] = paths.config_echo();
  write_manifest(doc, paths.manifest("gen_data"));
  return {doc, paths.manifest("gen_data")};
}

CommandResult cmd_train(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const OutPaths paths{cfg.run.out_dir};
  ensure_dir(paths.models_dir());
  ensure_dir(paths.reports_dir());
  const auto [train_table, test_table] = resolve_train_test(cfg, paths);

  json doc = base_manifest("train", cfg);
  std::vector<std::pair<std::string, MetricSet>> rows;
  std::string calibration_failure;

  for (ModelKind kind : cfg.train_kinds) {
    const std::string kname = model_kind_name(kind);
    const TrainSpec spec = train_spec(cfg, kind);
    CvOptions cv = cfg.cv;
    cv.threads = cfg.run.threads;
    std::vector<MetricSet> runs;
    for (std::uint64_t seed : cfg.run.seeds) {
      const std::string model_path = paths.model_file(kind, seed);
      json entry;
      entry["model"] = model_path;
      try {
        const TrainedModel model = fit_with_cv(spec, train_table, seed, cv);
        save_model_atomic(model, model_path);
        const MetricSet metrics = evaluate_model(model, test_table);
        entry["metrics"] = metrics_to_json(metrics);
        entry["threshold"] = model.threshold;
        runs.push_back(metrics);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::calibration) throw;
        entry["error"] = e.what();
        if (calibration_failure.empty()) {
          calibration_failure = kname + " seed " + std::to_string(seed) + ": " + e.what();
        }
      }
      doc["per_seed"][kname][std::to_string(seed)] = entry;
    }
    if (!runs.empty()) {
      const MetricSet median = aggregate_metrics(runs);
      doc["aggregate"][kname] = metrics_to_json(median);
      rows.emplace_back(model_display_name(kind), median);
    }
  }

  write_table(paths, "main_results", main_results_table(rows), doc);
  write_manifest(doc, paths.manifest("train"));
  if (!calibration_failure.empty()) {
    raise_calibration("train: " + calibration_failure + " (partial manifest written)");
  }
  return {doc, paths.manifest("train")};
}

CommandResult cmd_attack(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const OutPaths paths{cfg.run.out_dir};
  ensure_dir(paths.reports_dir());
  const ModelKind all_kinds[] = {ModelKind::base, ModelKind::adv, ModelKind::adv_per};
  require_model_files(paths, all_kinds, cfg.run.seeds);
  const auto [train_table, test_table] = resolve_train_test(cfg, paths);

  const Matrix z_train = protected_matrix(train_table);
  const Matrix z_test = protected_matrix(test_table);
  const PreprocessStats raw_stats = compute_stats(train_table);
  const Matrix raw_train = imputed_features(train_table, raw_stats);
  const Matrix raw_test = imputed_features(test_table, raw_stats);

  json doc = base_manifest("attack", cfg);
  std::vector<double> train_baselines, test_baselines;
  for (std::size_t a = 0; a < kProtectedCount; ++a) {
    const auto attr = static_cast<ProtectedAttr>(a);
    const std::vector<double> col_train = matrix_column(z_train, a);
    const std::vector<double> col_test = matrix_column(z_test, a);
    train_baselines.push_back(majority_baseline(col_train));
    test_baselines.push_back(majority_baseline(col_test));
    doc["baselines"][protected_attr_name(attr)] = {{"train", train_baselines.back()},
                                                   {"test", test_baselines.back()}};
  }

  const RepSource sources[] = {RepSource::raw_features, RepSource::base_encoder,
                               RepSource::adv_encoder, RepSource::adv_per_encoder};
  // runs[source][attr] accumulates one MetricSet per seed
  std::vector<std::vector<std::vector<MetricSet>>> runs(
      4, std::vector<std::vector<MetricSet>>(kProtectedCount));

  for (std::uint64_t seed : cfg.run.seeds) {
    const TrainedModel base = load_model(paths.model_file(ModelKind::base, seed));
    const TrainedModel adv = load_model(paths.model_file(ModelKind::adv, seed));
    const TrainedModel adv_per = load_model(paths.model_file(ModelKind::adv_per, seed));

    const Matrix base_train = encode(base, apply_preprocess(train_table, base.stats).x);
    const Matrix base_test = encode(base, apply_preprocess(test_table, base.stats).x);
    const Matrix adv_test = encode(adv, apply_preprocess(test_table, adv.stats).x);
    const Matrix adv_per_test = encode(adv_per, apply_preprocess(test_table, adv_per.stats).x);

    CvOptions cv = cfg.cv;
    cv.threads = 1;
    std::vector<Attacker> raw_attackers(kProtectedCount);
    std::vector<Attacker> enc_attackers(kProtectedCount);
    parallel_for(2 * kProtectedCount, cfg.run.threads, [&](std::size_t slot) {
      const std::size_t a = slot % kProtectedCount;
      const std::vector<double> attr = matrix_column(z_train, a);
      if (slot < kProtectedCount) {
        raw_attackers[a] = train_attacker(raw_train, attr, cfg.hp, RepSource::raw_features,
                                          derive_seed(seed, "attack-raw", a), cv);
      } else {
        enc_attackers[a] = train_attacker(base_train, attr, cfg.hp, RepSource::base_encoder,
                                          derive_seed(seed, "attack-encoder", a), cv);
      }
    });

    for (std::size_t a = 0; a < kProtectedCount; ++a) {
      const auto attr = static_cast<ProtectedAttr>(a);
      const std::vector<double> col_test = matrix_column(z_test, a);
      auto record = [&](RepSource source, const Attacker& attacker, const Matrix& reps) {
        AttackReport report = eval_attack(attacker, source, reps, col_test);
        report.attribute = attr;
        const std::size_t si = static_cast<std::size_t>(source);
        runs[si][a].push_back(report.metrics);
        json& node = doc["per_seed"][std::to_string(seed)][rep_source_name(source)]
                         [protected_attr_name(attr)];
        node["metrics"] = metrics_to_json(report.metrics);
        node["majority_baseline"] = report.majority_baseline;
        node["verdict"] =
            leakage_verdict(report) == LeakageVerdict::is_private ? "private" : "leaking";
      };
      record(RepSource::raw_features, raw_attackers[a], raw_test);
      record(RepSource::base_encoder, enc_attackers[a], base_test);
      record(RepSource::adv_encoder, enc_attackers[a], adv_test);
      record(RepSource::adv_per_encoder, enc_attackers[a], adv_per_test);
    }
  }

  const char* titles[] = {
      "Attacker on raw features (TEST)",
      "Attacker on the Base encoder output (TEST)",
      "Base-encoder attacker on the ADV encoder output (TEST)",
      "Base-encoder attacker on the ADV_per encoder output (TEST)",
  };
  const char* table_names[] = {"attack_raw", "attack_base_encoder", "attack_adv_encoder",
                               "attack_adv_per_encoder"};
  for (std::size_t si = 0; si < 4; ++si) {
    std::vector<AttackReport> aggregated;
    for (std::size_t a = 0; a < kProtectedCount; ++a) {
      AttackReport report;
      report.attribute = static_cast<ProtectedAttr>(a);
      report.source = sources[si];
      report.metrics = aggregate_metrics(runs[si][a]);
      report.majority_baseline = test_baselines[a];
      aggregated.push_back(report);
      json& node = doc["aggregate"][rep_source_name(sources[si])]
                      [protected_attr_name(report.attribute)];
      node["metrics"] = metrics_to_json(report.metrics);
      node["verdict"] =
          leakage_verdict(report) == LeakageVerdict::is_private ? "private" : "leaking";
    }
    write_table(paths, table_names[si], attack_table(titles[si], aggregated), doc);
  }
  write_table(paths, "attack_baselines", baselines_table(train_baselines, test_baselines), doc);

  write_manifest(doc, paths.manifest("attack"));
  return {doc, paths.manifest("attack")};
}

CommandResult cmd_crosstest(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const OutPaths paths{cfg.run.out_dir};
  ensure_dir(paths.reports_dir());
  const ModelKind needed[] = {ModelKind::base, ModelKind::adv};
  require_model_files(paths, needed, cfg.run.seeds);
  const auto [train_table, test_table] = resolve_train_test(cfg, paths);
  const DataTable combined = concat_tables(train_table, test_table);

  const auto cases = crosstest_cases();
  const std::size_t n_seeds = cfg.run.seeds.size();
  std::vector<CrossTestPair> results(cases.size() * n_seeds);
  CvOptions cv = cfg.cv;
  cv.threads = 1;
  parallel_for(results.size(), cfg.run.threads, [&](std::size_t task) {
    const std::size_t ci = task / n_seeds;
    const std::size_t si = task % n_seeds;
    results[task] = run_crosstest(cases[ci], combined, cfg.hp, cfg.lambda,
                                  cfg.run.seeds[si], cv);
  });

  json doc = base_manifest("crosstest", cfg);
  std::vector<CrossTestPair> aggregated;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    std::vector<MetricSet> base_runs, adv_runs;
    for (std::size_t si = 0; si < n_seeds; ++si) {
      const CrossTestPair& pair = results[ci * n_seeds + si];
      base_runs.push_back(pair.base);
      adv_runs.push_back(pair.adv);
      json& node = doc["per_seed"][std::to_string(cfg.run.seeds[si])][pair.tc.mnemonic];
      node["base"] = metrics_to_json(pair.base);
      node["adv"] = metrics_to_json(pair.adv);
    }
    CrossTestPair agg;
    agg.tc = cases[ci];
    agg.base = aggregate_metrics(base_runs);
    agg.adv = aggregate_metrics(adv_runs);
    aggregated.push_back(agg);
    json& node = doc["aggregate"][agg.tc.mnemonic];
    node["base"] = metrics_to_json(agg.base);
    node["adv"] = metrics_to_json(agg.adv);
    node["auc_gap"] = num_or_null(agg.adv.auc - agg.base.auc);
  }
  doc["max_abs_auc_gap"] = num_or_null(max_abs_gap(aggregated));

  write_table(paths, "crosstest", crosstest_table(aggregated), doc);
  write_manifest(doc, paths.manifest("crosstest"));
  return {doc, paths.manifest("crosstest")};
}

CommandResult cmd_external(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const OutPaths paths{cfg.run.out_dir};
  ensure_dir(paths.reports_dir());
  require_model_files(paths, cfg.train_kinds, cfg.run.seeds);
  const std::size_t n_holdouts = cfg.external.holdout_prevalences.size();
  for (std::size_t i = 0; i < n_holdouts; ++i) {
    if (!file_exists(paths.holdout_csv(i))) {
      raise_data("missing holdout file " + paths.holdout_csv(i) +
                 "; run the gen-data command first");
    }
  }

  json doc = base_manifest("external", cfg);

  // The threshold travels with the saved model; nothing here recalibrates.
  std::vector<std::vector<TrainedModel>> models(cfg.train_kinds.size());
  for (std::size_t k = 0; k < cfg.train_kinds.size(); ++k) {
    const std::string kname = model_kind_name(cfg.train_kinds[k]);
    for (std::uint64_t seed : cfg.run.seeds) {
      models[k].push_back(load_model(paths.model_file(cfg.train_kinds[k], seed)));
      doc["thresholds"][kname][std::to_string(seed)] = models[k].back().threshold;
    }
  }

  for (std::size_t i = 0; i < n_holdouts; ++i) {
    const std::string name = holdout_name(i);
    const DataTable holdout = load_table_checked(paths.holdout_csv(i), "rerun gen-data");
    doc["holdouts"][name] = describe_table(holdout, paths.holdout_csv(i));
    std::vector<std::pair<std::string, MetricSet>> rows;
    for (std::size_t k = 0; k < cfg.train_kinds.size(); ++k) {
      const std::string kname = model_kind_name(cfg.train_kinds[k]);
      std::vector<MetricSet> runs;
      for (std::size_t s = 0; s < cfg.run.seeds.size(); ++s) {
        const MetricSet metrics = evaluate_model(models[k][s], holdout);
        doc["per_seed"][std::to_string(cfg.run.seeds[s])][name][kname] =
            metrics_to_json(metrics);
        runs.push_back(metrics);
      }
      const MetricSet median = aggregate_metrics(runs);
      doc["aggregate"][name][kname] = metrics_to_json(median);
      rows.emplace_back(model_display_name(cfg.train_kinds[k]), median);
    }
    write_table(paths, "external_holdout_" + name, external_table(name, rows), doc);
  }

  write_manifest(doc, paths.manifest("external"));
  return {doc, paths.manifest("external")};
}

namespace {

json load_manifest_if_present(const OutPaths& paths, const std::string& command) {
  const std::string path = paths.manifest(command);
  if (!file_exists(path)) return json();
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) raise_data("manifest " + path + " is not valid JSON");
  return doc;
}

std::vector<std::pair<std::string, MetricSet>> rows_from_aggregate(const json& aggregate) {
  std::vector<std::pair<std::string, MetricSet>> rows;
  for (ModelKind kind : kReportOrder) {
    const std::string kname = model_kind_name(kind);
    if (aggregate.contains(kname)) {
      rows.emplace_back(model_display_name(kind), metrics_from_json(aggregate.at(kname)));
    }
  }
  return rows;
}

}  // namespace

std::string cmd_report(const ExperimentConfig& cfg) {
  const OutPaths paths{cfg.run.out_dir};
  std::string out;

  const json gen = load_manifest_if_present(paths, "gen_data");
  if (!gen.is_null()) {
    out += "Data files\n";
    for (const auto& [name, file] : gen.at("files").items()) {
      out += "  " + name + ": " + file.at("path").get<std::string>() + " rows=" +
             std::to_string(file.at("rows").get<std::size_t>()) +
             " prevalence=" + format_fixed(file.at("prevalence").get<double>(), 4) + "\n";
    }
    out += "\n";
  }

  const json train = load_manifest_if_present(paths, "train");
  if (!train.is_null() && train.contains("aggregate")) {
    out += to_text(main_results_table(rows_from_aggregate(train.at("aggregate")))) + "\n";
  }

  const json attack = load_manifest_if_present(paths, "attack");
  if (!attack.is_null() && attack.contains("aggregate")) {
    const char* titles[] = {
        "Attacker on raw features (TEST)",
        "Attacker on the Base encoder output (TEST)",
        "Base-encoder attacker on the ADV encoder output (TEST)",
        "Base-encoder attacker on the ADV_per encoder output (TEST)",
    };
    const RepSource sources[] = {RepSource::raw_features, RepSource::base_encoder,
                                 RepSource::adv_encoder, RepSource::adv_per_encoder};
    for (std::size_t si = 0; si < 4; ++si) {
      const json& agg = attack.at("aggregate");
      const std::string sname = rep_source_name(sources[si]);
      if (!agg.contains(sname)) continue;
      std::vector<AttackReport> reports;
      for (std::size_t a = 0; a < kProtectedCount; ++a) {
        const auto attr = static_cast<ProtectedAttr>(a);
        AttackReport report;
        report.attribute = attr;
        report.source = sources[si];
        report.metrics = metrics_from_json(agg.at(sname).at(protected_attr_name(attr))
                                               .at("metrics"));
        reports.push_back(report);
      }
      out += to_text(attack_table(titles[si], reports)) + "\n";
    }
    if (attack.contains("baselines")) {
      std::vector<double> train_b, test_b;
      for (std::size_t a = 0; a < kProtectedCount; ++a) {
        const json& b = attack.at("baselines")
                            .at(protected_attr_name(static_cast<ProtectedAttr>(a)));
        train_b.push_back(b.at("train").get<double>());
        test_b.push_back(b.at("test").get<double>());
      }
      out += to_text(baselines_table(train_b, test_b)) + "\n";
    }
  }

  const json crosstest = load_manifest_if_present(paths, "crosstest");
  if (!crosstest.is_null() && crosstest.contains("aggregate")) {
    std::vector<CrossTestPair> pairs;
    for (const CrossTestCase& tc : crosstest_cases()) {
      const json& agg = crosstest.at("aggregate");
      if (!agg.contains(tc.mnemonic)) continue;
      CrossTestPair pair;
      pair.tc = tc;
      pair.base = metrics_from_json(agg.at(tc.mnemonic).at("base"));
      pair.adv = metrics_from_json(agg.at(tc.mnemonic).at("adv"));
      pairs.push_back(pair);
    }
    out += to_text(crosstest_table(pairs)) + "\n";
  }

  const json external = load_manifest_if_present(paths, "external");
  if (!external.is_null() && external.contains("aggregate")) {
    for (const auto& [name, agg] : external.at("aggregate").items()) {
      out += to_text(external_table(name, rows_from_aggregate(agg))) + "\n";
    }
  }

  if (out.empty()) raise_data("no manifests found under " + cfg.run.out_dir);
  return out;
}

ExperimentConfig config_from_manifest_file(const std::string& path) {
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) raise_config("manifest " + path + " is not valid JSON");
  if (!doc.contains("config")) raise_config("manifest " + path + " has no config snapshot");
  ConfigMap map;
  for (const auto& [section, keys] : doc.at("config").items()) {
    for (const auto& [key, value] : keys.items()) {
      if (!value.is_string()) {
        raise_config("manifest " + path + ": config values must be strings");
      }
      map[section][key] = value.get<std::string>();
    }
  }
  return config_from_map(map);
}

ExperimentConfig load_config_any(const std::string& path) {
  if (!file_exists(path)) raise_config("config: cannot open " + path);
  const std::string text = read_file(path);
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return config_from_manifest_file(path);
    break;
  }
  return parse_config_text(text);
}

}  // namespace tabguard
