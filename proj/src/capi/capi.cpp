#include "tabguard/tabguard.h"

#include <cstring>
#include <string>

#include "core/error.hpp"
#include "core/model_io.hpp"
#include "core/pipeline.hpp"
#include "core/synthetic.hpp"
#include "experiment/runner.hpp"

struct tabguard_dataset {
  tabguard::DataTable table;
};

struct tabguard_model {
  tabguard::TrainedModel model;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
tabguard_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return TABGUARD_OK;
  } catch (const tabguard::Error& e) {
    g_last_error = e.what();
    return static_cast<tabguard_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TABGUARD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return TABGUARD_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) tabguard::raise_invalid(what);
}

tabguard::SyntheticSpec spec_from_c(const tabguard_synthetic_spec& c) {
  tabguard::SyntheticSpec spec;
  spec.n_rows = c.n_rows;
  spec.prevalence = c.prevalence;
  for (std::size_t i = 0; i < tabguard::kProtectedCount; ++i) {
    spec.attr_priors[i] = c.attr_priors[i];
    spec.leakage_strength[i] = c.leakage_strength[i];
  }
  spec.label_signal = c.label_signal;
  spec.seed = c.seed;
  return spec;
}

tabguard::ModelKind kind_from_c(tabguard_model_kind kind) {
  switch (kind) {
    case TABGUARD_MODEL_BASE:
      return tabguard::ModelKind::base;
    case TABGUARD_MODEL_ADV:
      return tabguard::ModelKind::adv;
    case TABGUARD_MODEL_ADV_PER:
      return tabguard::ModelKind::adv_per;
  }
  tabguard::raise_invalid("unknown model kind");
}

tabguard::ExperimentConfig config_from_options(const tabguard_run_options* opts) {
  tabguard::ExperimentConfig cfg;
  if (opts && opts->config_path) cfg = tabguard::load_config_any(opts->config_path);
  if (opts) {
    if (opts->out_dir) cfg.run.out_dir = opts->out_dir;
    if (opts->seeds && opts->n_seeds > 0) {
      cfg.run.seeds.assign(opts->seeds, opts->seeds + opts->n_seeds);
    }
    if (opts->model_kind) {
      cfg.train_kinds = {tabguard::model_kind_from_name(opts->model_kind)};
    }
    if (opts->threads > 0) cfg.run.threads = opts->threads;
  }
  tabguard::validate_config(cfg);
  return cfg;
}

}  // namespace

extern "C" {

const char* tabguard_version(void) { return "1.0.0"; }

const char* tabguard_last_error(void) { return g_last_error.c_str(); }

void tabguard_synthetic_spec_defaults(tabguard_synthetic_spec* spec) {
  if (!spec) return;
  const tabguard::SyntheticSpec d;
  spec->n_rows = d.n_rows;
  spec->prevalence = d.prevalence;
  for (std::size_t i = 0; i < tabguard::kProtectedCount; ++i) {
    spec->attr_priors[i] = d.attr_priors[i];
    spec->leakage_strength[i] = d.leakage_strength[i];
  }
  spec->label_signal = d.label_signal;
  spec->seed = d.seed;
}

tabguard_status tabguard_dataset_generate(const tabguard_synthetic_spec* spec,
                                          tabguard_dataset** out) {
  return wrap([&] {
    require(spec != nullptr && out != nullptr, "spec and out must not be NULL");
    auto table = tabguard::generate_synthetic(spec_from_c(*spec));
    *out = new tabguard_dataset{std::move(table)};
  });
}

tabguard_status tabguard_dataset_load_csv(const char* path, tabguard_dataset** out) {
  return wrap([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    auto table = tabguard::exclude_minors(tabguard::load_csv(path));
    *out = new tabguard_dataset{std::move(table)};
  });
}

tabguard_status tabguard_dataset_save_csv(const tabguard_dataset* data, const char* path) {
  return wrap([&] {
    require(data != nullptr && path != nullptr, "data and path must not be NULL");
    tabguard::save_csv(data->table, path);
  });
}

size_t tabguard_dataset_rows(const tabguard_dataset* data) {
  return data ? data->table.rows() : 0;
}

size_t tabguard_dataset_feature_count(void) { return tabguard::kFeatureCount; }

void tabguard_dataset_free(tabguard_dataset* data) { delete data; }

void tabguard_train_options_defaults(tabguard_train_options* opts) {
  if (!opts) return;
  const tabguard::Hyperparams hp;
  const tabguard::FgsmConfig fgsm;
  const tabguard::CvOptions cv;
  opts->kind = TABGUARD_MODEL_BASE;
  opts->lr = hp.lr;
  opts->batch_size = hp.batch_size;
  opts->hidden_dim = hp.hidden_dim;
  opts->disc_hidden_dim = hp.disc_hidden_dim;
  opts->dropout = hp.dropout_rate;
  opts->epochs = hp.epochs;
  opts->lambda_ = 2.0;
  opts->epsilon = fgsm.epsilon;
  opts->alpha = fgsm.alpha;
  opts->seed = 1;
  opts->folds = cv.folds;
  opts->recall_lo = cv.recall_lo;
  opts->recall_hi = cv.recall_hi;
  opts->threads = 1;
}

tabguard_status tabguard_model_train(const tabguard_dataset* data,
                                     const tabguard_train_options* opts, tabguard_model** out) {
  return wrap([&] {
    require(data != nullptr && opts != nullptr && out != nullptr,
            "data, opts, and out must not be NULL");
    tabguard::TrainSpec spec;
    spec.kind = kind_from_c(opts->kind);
    spec.hp.lr = opts->lr;
    spec.hp.batch_size = opts->batch_size;
    spec.hp.hidden_dim = opts->hidden_dim;
    spec.hp.disc_hidden_dim = opts->disc_hidden_dim;
    spec.hp.dropout_rate = opts->dropout;
    spec.hp.epochs = opts->epochs;
    spec.lambda = opts->lambda_;
    spec.fgsm.epsilon = opts->epsilon;
    spec.fgsm.alpha = opts->alpha;
    tabguard::CvOptions cv;
    cv.folds = opts->folds;
    cv.recall_lo = opts->recall_lo;
    cv.recall_hi = opts->recall_hi;
    cv.threads = opts->threads;
    auto model = tabguard::fit_with_cv(spec, data->table, opts->seed, cv);
    *out = new tabguard_model{std::move(model)};
  });
}

tabguard_status tabguard_model_load(const char* path, tabguard_model** out) {
  return wrap([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    auto model = tabguard::load_model(path);
    *out = new tabguard_model{std::move(model)};
  });
}

tabguard_status tabguard_model_save(const tabguard_model* model, const char* path) {
  return wrap([&] {
    require(model != nullptr && path != nullptr, "model and path must not be NULL");
    tabguard::save_model(model->model, path);
  });
}

tabguard_status tabguard_model_kind_of(const tabguard_model* model, tabguard_model_kind* out) {
  return wrap([&] {
    require(model != nullptr && out != nullptr, "model and out must not be NULL");
    *out = static_cast<tabguard_model_kind>(static_cast<int>(model->model.kind));
  });
}

tabguard_status tabguard_model_threshold(const tabguard_model* model, double* out) {
  return wrap([&] {
    require(model != nullptr && out != nullptr, "model and out must not be NULL");
    if (!model->model.calibrated) tabguard::raise_protocol("model has no calibrated threshold");
    *out = model->model.threshold;
  });
}

tabguard_status tabguard_model_encoder_dim(const tabguard_model* model, size_t* out) {
  return wrap([&] {
    require(model != nullptr && out != nullptr, "model and out must not be NULL");
    *out = model->model.encoder_dim();
  });
}

tabguard_status tabguard_model_predict(const tabguard_model* model, const tabguard_dataset* data,
                                       double* probs, size_t probs_len) {
  return wrap([&] {
    require(model != nullptr && data != nullptr && probs != nullptr,
            "model, data, and probs must not be NULL");
    const auto prepared = tabguard::apply_preprocess(data->table, model->model.stats);
    require(probs_len >= prepared.rows(), "probs buffer is too small");
    const auto scores = tabguard::predict_proba(model->model, prepared.x);
    std::memcpy(probs, scores.data(), scores.size() * sizeof(double));
  });
}

tabguard_status tabguard_model_encode(const tabguard_model* model, const tabguard_dataset* data,
                                      double* out, size_t out_len) {
  return wrap([&] {
    require(model != nullptr && data != nullptr && out != nullptr,
            "model, data, and out must not be NULL");
    const auto prepared = tabguard::apply_preprocess(data->table, model->model.stats);
    const auto reps = tabguard::encode(model->model, prepared.x);
    require(out_len >= reps.rows() * reps.cols(), "out buffer is too small");
    std::memcpy(out, reps.data(), reps.rows() * reps.cols() * sizeof(double));
  });
}

void tabguard_model_free(tabguard_model* model) { delete model; }

void tabguard_run_options_defaults(tabguard_run_options* opts) {
  if (!opts) return;
  opts->config_path = nullptr;
  opts->out_dir = nullptr;
  opts->seeds = nullptr;
  opts->n_seeds = 0;
  opts->model_kind = nullptr;
  opts->threads = 0;
}

tabguard_status tabguard_cmd_gen_data(const tabguard_run_options* opts) {
  return wrap([&] { tabguard::cmd_gen_data(config_from_options(opts)); });
}

tabguard_status tabguard_cmd_train(const tabguard_run_options* opts) {
  return wrap([&] { tabguard::cmd_train(config_from_options(opts)); });
}

tabguard_status tabguard_cmd_attack(const tabguard_run_options* opts) {
  return wrap([&] { tabguard::cmd_attack(config_from_options(opts)); });
}

tabguard_status tabguard_cmd_crosstest(const tabguard_run_options* opts) {
  return wrap([&] { tabguard::cmd_crosstest(config_from_options(opts)); });
}

tabguard_status tabguard_cmd_external(const tabguard_run_options* opts) {
  return wrap([&] { tabguard::cmd_external(config_from_options(opts)); });
}

tabguard_status tabguard_cmd_report(const tabguard_run_options* opts, char** out_text) {
  return wrap([&] {
    require(out_text != nullptr, "out_text must not be NULL");
    const std::string text = tabguard::cmd_report(config_from_options(opts));
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

void tabguard_string_free(char* text) { delete[] text; }

}  // extern "C"
