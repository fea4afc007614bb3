#include "experiment/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "experiment/format.hpp"

namespace tabguard {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double_strict(item, what));
  return out;
}

template <std::size_t N>
std::array<double, N> parse_double_array(const std::string& s, const std::string& what) {
  auto list = parse_double_list(s, what);
  if (list.size() != N) {
    raise_config(what + ": expected " + std::to_string(N) + " comma-separated values, got " +
                 std::to_string(list.size()));
  }
  std::array<double, N> out{};
  std::copy(list.begin(), list.end(), out.begin());
  return out;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  return static_cast<std::size_t>(parse_uint_strict(s, what));
}

// Applies one key under one section; `where` names the source location for
// error messages.
void apply_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, const std::string& where) {
  const std::string what = where + ": [" + section + "] " + key;
  if (section == "data") {
    if (key == "source") {
      if (value != "synthetic" && value != "csv") {
        raise_config(what + ": must be \"synthetic\" or \"csv\"");
      }
      cfg.data.source = value;
    } else if (key == "train_csv") {
      cfg.data.train_csv = value;
    } else if (key == "test_csv") {
      cfg.data.test_csv = value;
    } else if (key == "n_rows") {
      cfg.data.synthetic.n_rows = parse_size(value, what);
    } else if (key == "prevalence") {
      cfg.data.synthetic.prevalence = parse_double_strict(value, what);
    } else if (key == "attr_priors") {
      cfg.data.synthetic.attr_priors = parse_double_array<kProtectedCount>(value, what);
    } else if (key == "leakage_strength") {
      cfg.data.synthetic.leakage_strength = parse_double_array<kProtectedCount>(value, what);
    } else if (key == "label_signal") {
      cfg.data.synthetic.label_signal = parse_double_strict(value, what);
    } else if (key == "seed") {
      cfg.data.synthetic.seed = parse_uint_strict(value, what);
    } else if (key == "test_fraction") {
      cfg.data.test_fraction = parse_double_strict(value, what);
    } else {
      raise_config(what + ": unknown key");
    }
  } else if (section == "model") {
    if (key == "kind") {
      if (value == "all") {
        cfg.train_kinds = {ModelKind::base, ModelKind::adv_per, ModelKind::adv};
      } else if (value == "base" || value == "adv" || value == "adv_per") {
        cfg.train_kinds = {model_kind_from_name(value)};
      } else {
        raise_config(what + ": must be all, base, adv, or adv_per");
      }
    } else {
      raise_config(what + ": unknown key");
    }
  } else if (section == "hyperparams") {
    if (key == "lr") {
      cfg.hp.lr = parse_double_strict(value, what);
    } else if (key == "batch_size") {
      cfg.hp.batch_size = parse_size(value, what);
    } else if (key == "hidden_dim") {
      cfg.hp.hidden_dim = parse_size(value, what);
    } else if (key == "disc_hidden_dim") {
      cfg.hp.disc_hidden_dim = parse_size(value, what);
    } else if (key == "dropout") {
      cfg.hp.dropout_rate = parse_double_strict(value, what);
    } else if (key == "epochs") {
      cfg.hp.epochs = parse_size(value, what);
    } else if (key == "adv_per_epochs") {
      cfg.adv_per_epochs = parse_size(value, what);
    } else {
      raise_config(what + ": unknown key");
    }
  } else if (section == "adversarial") {
    if (key == "lambda") {
      cfg.lambda = parse_double_strict(value, what);
    } else if (key == "epsilon") {
      cfg.fgsm.epsilon = parse_double_strict(value, what);
    } else if (key == "alpha") {
      cfg.fgsm.alpha = parse_double_strict(value, what);
    } else if (key == "intercept_layer") {
      if (value == "encoder") {
        cfg.fgsm.intercept_layer = kInterceptAtEncoder;
      } else {
        cfg.fgsm.intercept_layer = parse_size(value, what);
      }
    } else {
      raise_config(what + ": unknown key");
    }
  } else if (section == "calibration") {
    if (key == "folds") {
      cfg.cv.folds = parse_size(value, what);
    } else if (key == "recall_lo") {
      cfg.cv.recall_lo = parse_double_strict(value, what);
    } else if (key == "recall_hi") {
      cfg.cv.recall_hi = parse_double_strict(value, what);
    } else {
      raise_config(what + ": unknown key");
    }
  } else if (section == "run") {
    if (key == "seeds") {
      std::vector<std::uint64_t> seeds;
      for (const auto& item : split_list(value)) seeds.push_back(parse_uint_strict(item, what));
      if (seeds.empty()) raise_config(what + ": needs at least one seed");
      cfg.run.seeds = std::move(seeds);
    } else if (key == "threads") {
      cfg.run.threads = static_cast<int>(parse_uint_strict(value, what));
    } else if (key == "out_dir") {
      cfg.run.out_dir = value;
    } else {
      raise_config(what + ": unknown key");
    }
  } else if (section == "external") {
    if (key == "holdout_prevalences") {
      cfg.external.holdout_prevalences = parse_double_list(value, what);
    } else if (key == "holdout_rows") {
      cfg.external.holdout_rows = parse_size(value, what);
    } else {
      raise_config(what + ": unknown key");
    }
  } else {
    raise_config(where + ": unknown section [" + section + "]");
  }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.data.source == "csv") {
    if (cfg.data.train_csv.empty() || cfg.data.test_csv.empty()) {
      raise_config("config: [data] source = csv requires train_csv and test_csv");
    }
  } else {
    try {
      validate_synthetic(cfg.data.synthetic);
    } catch (const Error& e) {
      raise_config(std::string("config: [data] ") + e.what());
    }
  }
  if (!(cfg.data.test_fraction > 0.0 && cfg.data.test_fraction < 1.0)) {
    raise_config("config: [data] test_fraction must lie in (0, 1)");
  }
  if (cfg.train_kinds.empty()) raise_config("config: [model] kind selects no models");
  try {
    validate_hyperparams(cfg.hp);
  } catch (const Error& e) {
    raise_config(std::string("config: [hyperparams] ") + e.what());
  }
  if (cfg.hp.epochs == 0) raise_config("config: [hyperparams] epochs must be >= 1");
  if (cfg.adv_per_epochs == 0) raise_config("config: [hyperparams] adv_per_epochs must be >= 1");
  if (cfg.lambda < 0.0) raise_config("config: [adversarial] lambda must be >= 0");
  if (cfg.fgsm.epsilon < 0.0) raise_config("config: [adversarial] epsilon must be >= 0");
  if (!(cfg.fgsm.alpha >= 0.0 && cfg.fgsm.alpha <= 1.0)) {
    raise_config("config: [adversarial] alpha must lie in [0, 1]");
  }
  if (cfg.cv.folds < 2) raise_config("config: [calibration] folds must be >= 2");
  if (!(cfg.cv.recall_lo > 0.0 && cfg.cv.recall_lo <= cfg.cv.recall_hi && cfg.cv.recall_hi < 1.0)) {
    raise_config("config: [calibration] needs 0 < recall_lo <= recall_hi < 1");
  }
  if (cfg.run.seeds.empty()) raise_config("config: [run] seeds must not be empty");
  if (cfg.run.threads < 1) raise_config("config: [run] threads must be >= 1");
  if (cfg.run.out_dir.empty()) raise_config("config: [run] out_dir must not be empty");
  if (cfg.external.holdout_prevalences.empty()) {
    raise_config("config: [external] holdout_prevalences must not be empty");
  }
  for (double p : cfg.external.holdout_prevalences) {
    if (!(p > 0.0 && p < 1.0)) {
      raise_config("config: [external] holdout_prevalences must lie in (0, 1)");
    }
  }
  if (cfg.external.holdout_rows == 0) {
    raise_config("config: [external] holdout_rows must be >= 1");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        raise_config(where + ": malformed section header \"" + line + "\"");
      }
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"data",        "model", "hyperparams", "adversarial",
                                    "calibration", "run",   "external"};
      bool ok = false;
      for (const char* name : known) ok = ok || section == name;
      if (!ok) raise_config(where + ": unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise_config(where + ": expected key = value, got \"" + line + "\"");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) raise_config(where + ": empty key");
    if (section.empty()) raise_config(where + ": key \"" + key + "\" appears before any section");
    apply_key(cfg, section, key, value, where);
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise_config("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ConfigMap config_to_map(const ExperimentConfig& cfg) {
  ConfigMap m;
  auto join = [](const auto& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ',';
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(values[0])>>) {
        out += format_double(values[i]);
      } else {
        out += std::to_string(values[i]);
      }
    }
    return out;
  };
  auto& data = m["data"];
  data["source"] = cfg.data.source;
  data["train_csv"] = cfg.data.train_csv;
  data["test_csv"] = cfg.data.test_csv;
  data["n_rows"] = std::to_string(cfg.data.synthetic.n_rows);
  data["prevalence"] = format_double(cfg.data.synthetic.prevalence);
  data["attr_priors"] = join(cfg.data.synthetic.attr_priors);
  data["leakage_strength"] = join(cfg.data.synthetic.leakage_strength);
  data["label_signal"] = format_double(cfg.data.synthetic.label_signal);
  data["seed"] = std::to_string(cfg.data.synthetic.seed);
  data["test_fraction"] = format_double(cfg.data.test_fraction);
  m["model"]["kind"] =
      cfg.train_kinds.size() == 1 ? model_kind_name(cfg.train_kinds[0]) : "all";
  auto& hp = m["hyperparams"];
  hp["lr"] = format_double(cfg.hp.lr);
  hp["batch_size"] = std::to_string(cfg.hp.batch_size);
  hp["hidden_dim"] = std::to_string(cfg.hp.hidden_dim);
  hp["disc_hidden_dim"] = std::to_string(cfg.hp.disc_hidden_dim);
  hp["dropout"] = format_double(cfg.hp.dropout_rate);
  hp["epochs"] = std::to_string(cfg.hp.epochs);
  hp["adv_per_epochs"] = std::to_string(cfg.adv_per_epochs);
  auto& adv = m["adversarial"];
  adv["lambda"] = format_double(cfg.lambda);
  adv["epsilon"] = format_double(cfg.fgsm.epsilon);
  adv["alpha"] = format_double(cfg.fgsm.alpha);
  adv["intercept_layer"] = cfg.fgsm.intercept_layer == kInterceptAtEncoder
                               ? std::string("encoder")
                               : std::to_string(cfg.fgsm.intercept_layer);
  auto& cal = m["calibration"];
  cal["folds"] = std::to_string(cfg.cv.folds);
  cal["recall_lo"] = format_double(cfg.cv.recall_lo);
  cal["recall_hi"] = format_double(cfg.cv.recall_hi);
  auto& run = m["run"];
  run["seeds"] = join(cfg.run.seeds);
  run["threads"] = std::to_string(cfg.run.threads);
  run["out_dir"] = cfg.run.out_dir;
  auto& ext = m["external"];
  ext["holdout_prevalences"] = join(cfg.external.holdout_prevalences);
  ext["holdout_rows"] = std::to_string(cfg.external.holdout_rows);
  return m;
}

ExperimentConfig config_from_map(const ConfigMap& map) {
  ExperimentConfig cfg;
  for (const auto& [section, keys] : map) {
    for (const auto& [key, value] : keys) {
      apply_key(cfg, section, key, value, "manifest config");
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [section, keys] : config_to_map(cfg)) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : keys) out += key + " = " + value + "\n";
    out += "\n";
  }
  return out;
}

TrainSpec train_spec(const ExperimentConfig& cfg, ModelKind kind) {
  TrainSpec spec;
  spec.kind = kind;
  spec.hp = cfg.hp;
  if (kind == ModelKind::adv_per) spec.hp.epochs = cfg.adv_per_epochs;
  spec.lambda = cfg.lambda;
  spec.fgsm = cfg.fgsm;
  return spec;
}

}  // namespace tabguard
