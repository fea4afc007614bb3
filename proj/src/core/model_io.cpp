#include "core/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "core/error.hpp"

namespace tabguard {

namespace {

constexpr char kMagic[4] = {'T', 'G', 'M', 'D'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) raise_data("cannot write " + path);
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), n); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) {
    std::uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    bytes(b, 4);
  }
  void u64(std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64_array(const double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) f64(p[i]);
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  bool good() const { return static_cast<bool>(out_); }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) raise_data("cannot open model file " + path);
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n)) {
      raise_data("truncated model file " + path_);
    }
  }
  std::uint8_t u8() {
    std::uint8_t v = 0;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    std::uint8_t b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint8_t b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void f64_array(double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) p[i] = f64();
  }
  std::string str(std::size_t max_len = 1 << 20) {
    const std::uint64_t n = u64();
    if (n > max_len) raise_data("corrupt string length in model file " + path_);
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_vec(Writer& w, const std::vector<double>& v) {
  w.u64(v.size());
  w.f64_array(v.data(), v.size());
}

std::vector<double> read_vec(Reader& r, std::size_t max_len = 1 << 28) {
  const std::uint64_t n = r.u64();
  if (n > max_len) raise_data("corrupt array length in model file");
  std::vector<double> v(n);
  r.f64_array(v.data(), n);
  return v;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.kind));
  w.u8(model.calibrated ? 1 : 0);
  w.f64(model.threshold);
  w.f64(model.lambda);
  w.f64(model.fgsm.epsilon);
  w.f64(model.fgsm.alpha);
  w.u64(model.fgsm.intercept_layer);
  w.u64(model.seed);
  w.f64(model.hp.lr);
  w.u64(model.hp.batch_size);
  w.u64(model.hp.hidden_dim);
  w.u64(model.hp.disc_hidden_dim);
  w.f64(model.hp.dropout_rate);
  w.u64(model.hp.epochs);
  w.u64(model.encoder_end);

  w.f64(model.stats.age_cutoff);
  write_vec(w, model.stats.mean);
  write_vec(w, model.stats.stddev);
  write_vec(w, model.stats.impute);

  w.u64(model.log.size());
  for (const EpochLogEntry& e : model.log) {
    w.u64(e.epoch);
    w.f64(e.main_loss);
    w.f64(e.main_acc);
    write_vec(w, e.disc_acc);
  }

  w.u64(model.stack.layers.size());
  for (const Layer& layer : model.stack.layers) {
    w.u8(static_cast<std::uint8_t>(layer.spec.kind));
    w.u64(layer.spec.in_dim);
    w.u64(layer.spec.out_dim);
    w.f64(layer.spec.rate);
    w.u64(layer.params.size());
    for (const ParamTensor& p : layer.params) {
      w.str(p.name);
      w.u64(p.value.rows());
      w.u64(p.value.cols());
      w.f64_array(p.value.data(), p.value.size());
    }
    if (layer.spec.kind == LayerKind::batchnorm) {
      w.f64_array(layer.running_mean.data(), layer.running_mean.size());
      w.f64_array(layer.running_var.data(), layer.running_var.size());
    }
  }
  if (!w.good()) raise_data("write failed for " + path);
}

TrainedModel load_model(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) raise_data(path + " is not a model file");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    raise_data(path + " has unsupported format version " + std::to_string(version));
  }
  TrainedModel model;
  const std::uint8_t kind = r.u8();
  if (kind > 2) raise_data(path + " has an unknown model kind");
  model.kind = static_cast<ModelKind>(kind);
  model.calibrated = r.u8() != 0;
  model.threshold = r.f64();
  model.lambda = r.f64();
  model.fgsm.epsilon = r.f64();
  model.fgsm.alpha = r.f64();
  model.fgsm.intercept_layer = r.u64();
  model.seed = r.u64();
  model.hp.lr = r.f64();
  model.hp.batch_size = r.u64();
  model.hp.hidden_dim = r.u64();
  model.hp.disc_hidden_dim = r.u64();
  model.hp.dropout_rate = r.f64();
  model.hp.epochs = r.u64();
  model.encoder_end = r.u64();

  model.stats.age_cutoff = r.f64();
  model.stats.mean = read_vec(r);
  model.stats.stddev = read_vec(r);
  model.stats.impute = read_vec(r);

  const std::uint64_t log_count = r.u64();
  if (log_count > (1u << 20)) raise_data("corrupt log length in " + path);
  for (std::uint64_t i = 0; i < log_count; ++i) {
    EpochLogEntry e;
    e.epoch = r.u64();
    e.main_loss = r.f64();
    e.main_acc = r.f64();
    e.disc_acc = read_vec(r, 64);
    model.log.push_back(std::move(e));
  }

  const std::uint64_t layer_count = r.u64();
  if (layer_count == 0 || layer_count > 4096) raise_data("corrupt layer count in " + path);
  std::vector<LayerSpec> specs;
  struct Payload {
    std::vector<std::pair<std::string, Matrix>> params;
    Matrix running_mean, running_var;
  };
  std::vector<Payload> payloads;
  for (std::uint64_t i = 0; i < layer_count; ++i) {
    const std::uint8_t k = r.u8();
    if (k > 4) raise_data("unknown layer kind in " + path);
    LayerSpec spec;
    spec.kind = static_cast<LayerKind>(k);
    spec.in_dim = r.u64();
    spec.out_dim = r.u64();
    spec.rate = r.f64();
    specs.push_back(spec);
    Payload pl;
    const std::uint64_t n_params = r.u64();
    if (n_params > 16) raise_data("corrupt parameter count in " + path);
    for (std::uint64_t p = 0; p < n_params; ++p) {
      std::string name = r.str(256);
      const std::uint64_t rows = r.u64();
      const std::uint64_t cols = r.u64();
      if (rows == 0 || cols == 0 || rows * cols > (1u << 28)) {
        raise_data("corrupt tensor shape in " + path);
      }
      Matrix m(rows, cols);
      r.f64_array(m.data(), m.size());
      pl.params.emplace_back(std::move(name), std::move(m));
    }
    if (spec.kind == LayerKind::batchnorm) {
      pl.running_mean = Matrix(1, spec.in_dim);
      pl.running_var = Matrix(1, spec.in_dim);
      r.f64_array(pl.running_mean.data(), spec.in_dim);
      r.f64_array(pl.running_var.data(), spec.in_dim);
    }
    payloads.push_back(std::move(pl));
  }

  model.stack = build_stack(specs);
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    Layer& layer = model.stack.layers[i];
    if (payloads[i].params.size() != layer.params.size()) {
      raise_data("parameter arity mismatch in " + path);
    }
    for (std::size_t p = 0; p < layer.params.size(); ++p) {
      auto& [name, value] = payloads[i].params[p];
      if (name != layer.params[p].name || !value.same_shape(layer.params[p].value)) {
        raise_data("parameter name or shape mismatch in " + path);
      }
      layer.params[p].value = std::move(value);
    }
    if (layer.spec.kind == LayerKind::batchnorm) {
      layer.running_mean = std::move(payloads[i].running_mean);
      layer.running_var = std::move(payloads[i].running_var);
    }
  }
  if (model.encoder_end == 0 || model.encoder_end > model.stack.layers.size()) {
    raise_data("corrupt encoder boundary in " + path);
  }
  return model;
}

}  // namespace tabguard
