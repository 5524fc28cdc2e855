// Copyright 2026 The kcqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "kcqe/surrogate.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "kcqe/format.hpp"
#include "kcqe/rng.hpp"

namespace kcqe {

using json = nlohmann::ordered_json;

namespace {

constexpr int kModelFormatVersion = 1;

RealMatrix activate(Activation a, const RealMatrix& z) {
  switch (a) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kTanh:
      return z.array().tanh().matrix();
  }
  return z;
}

// Derivative expressed through the pre-activation z.
RealMatrix activate_prime(Activation a, const RealMatrix& z) {
  switch (a) {
    case Activation::kRelu:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::kTanh:
      return (1.0 - z.array().tanh().square()).matrix();
  }
  return RealMatrix::Ones(z.rows(), z.cols());
}

void check_input(const MlpParams& params, Eigen::Index rows) {
  if (rows != params.config().input_dim) {
    throw std::invalid_argument(
        "mlp: input has dimension " + std::to_string(rows) + ", expected " +
        std::to_string(params.config().input_dim));
  }
}

json vector_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

RealVector vector_from(const json& j) {
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json mlp_json(const MlpConfig& c) {
  json j;
  j["input_dim"] = c.input_dim;
  j["output_dim"] = c.output_dim;
  j["hidden_width"] = c.hidden_width;
  j["hidden_layers"] = c.hidden_layers;
  j["residual"] = c.residual;
  j["activation"] = std::string(to_string(c.activation));
  j["seed"] = c.seed;
  return j;
}

MlpConfig mlp_from(const json& j) {
  MlpConfig c;
  c.input_dim = j.at("input_dim").get<int>();
  c.output_dim = j.at("output_dim").get<int>();
  c.hidden_width = j.at("hidden_width").get<int>();
  c.hidden_layers = j.at("hidden_layers").get<int>();
  c.residual = j.at("residual").get<bool>();
  c.activation = activation_from_string(j.at("activation").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

RealMatrix gather(const RealMatrix& m, const std::vector<Eigen::Index>& cols) {
  RealMatrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
  }
  return out;
}

double mse(const RealMatrix& p, const RealMatrix& y) {
  if (p.size() == 0) return 0.0;
  return (p - y).squaredNorm() / static_cast<double>(p.size());
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "' (expected relu or tanh)");
}

void MlpConfig::validate() const {
  if (input_dim < 1 || output_dim < 1 || hidden_width < 1) {
    throw std::invalid_argument("mlp: dimensions must be >= 1");
  }
  if (hidden_layers < 0) {
    throw std::invalid_argument("mlp: hidden_layers must be >= 0");
  }
}

MlpParams::MlpParams(const MlpConfig& config) : config_(config) {
  config_.validate();
  Eigen::Index total = 0;
  for (int l = 0; l < num_dense(); ++l) {
    offsets_.push_back(total);
    total += static_cast<Eigen::Index>(out_dim(l)) * (in_dim(l) + 1);
  }
  data_ = RealVector::Zero(total);
}

int MlpParams::in_dim(int layer) const {
  return layer == 0 ? config_.input_dim : config_.hidden_width;
}

int MlpParams::out_dim(int layer) const {
  return layer == num_dense() - 1 ? config_.output_dim : config_.hidden_width;
}

Eigen::Map<RowMajorMatrix> MlpParams::w(int layer) {
  return {data_.data() + offsets_.at(layer), out_dim(layer), in_dim(layer)};
}

Eigen::Map<const RowMajorMatrix> MlpParams::w(int layer) const {
  return {data_.data() + offsets_.at(layer), out_dim(layer), in_dim(layer)};
}

Eigen::Map<RealVector> MlpParams::b(int layer) {
  return {data_.data() + offsets_.at(layer) +
              static_cast<Eigen::Index>(out_dim(layer)) * in_dim(layer),
          out_dim(layer)};
}

Eigen::Map<const RealVector> MlpParams::b(int layer) const {
  return {data_.data() + offsets_.at(layer) +
              static_cast<Eigen::Index>(out_dim(layer)) * in_dim(layer),
          out_dim(layer)};
}

std::string MlpParams::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < data_.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(data_(i));
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MlpParams init(const MlpConfig& config) {
  MlpParams p(config);
  for (int l = 0; l < p.num_dense(); ++l) {
    StreamRng rng(config.seed, static_cast<std::uint64_t>(l));
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.in_dim(l)));
    auto w = p.w(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = rng.uniform(-bound, bound);
      }
    }
  }
  return p;
}

RealMatrix forward_batch(const MlpParams& params, const RealMatrix& x) {
  check_input(params, x.rows());
  const MlpConfig& c = params.config();
  RealMatrix h = params.w(0) * x;
  h.colwise() += params.b(0);
  for (int l = 1; l <= c.hidden_layers; ++l) {
    RealMatrix z = params.w(l) * h;
    z.colwise() += params.b(l);
    if (c.residual) {
      h += activate(c.activation, z);
    } else {
      h = activate(c.activation, z);
    }
  }
  const int last = params.num_dense() - 1;
  RealMatrix out = params.w(last) * h;
  out.colwise() += params.b(last);
  return out;
}

RealVector forward(const MlpParams& params, const RealVector& x) {
  return forward_batch(params, x);
}

double loss(const MlpParams& params, const RealMatrix& x, const RealMatrix& y) {
  const double value = mse(forward_batch(params, x), y);
  if (!std::isfinite(value)) throw NumericalError("mlp: loss is not finite");
  return value;
}

double loss_and_gradient(const MlpParams& params, const RealMatrix& x,
                         const RealMatrix& y, RealVector& gradient) {
  check_input(params, x.rows());
  const MlpConfig& c = params.config();
  if (x.cols() == 0) throw std::invalid_argument("mlp: empty batch");
  if (y.rows() != c.output_dim || y.cols() != x.cols()) {
    throw std::invalid_argument("mlp: target shape mismatch");
  }

  // h[l] is the input of dense layer l + 1; z[l] the block pre-activations.
  std::vector<RealMatrix> h;
  std::vector<RealMatrix> z;
  h.reserve(c.hidden_layers + 1);
  z.reserve(c.hidden_layers);
  h.push_back(params.w(0) * x);
  h.back().colwise() += params.b(0);
  for (int l = 1; l <= c.hidden_layers; ++l) {
    z.push_back(params.w(l) * h.back());
    z.back().colwise() += params.b(l);
    RealMatrix next = activate(c.activation, z.back());
    if (c.residual) next += h.back();
    h.push_back(std::move(next));
  }
  const int last = params.num_dense() - 1;
  RealMatrix out = params.w(last) * h.back();
  out.colwise() += params.b(last);

  const RealMatrix diff = out - y;
  const double value = diff.squaredNorm() / static_cast<double>(diff.size());
  if (!std::isfinite(value)) {
    throw NumericalError("mlp: non-finite loss");
  }

  MlpParams grad(c);
  RealMatrix delta = (2.0 / static_cast<double>(diff.size())) * diff;
  grad.w(last).noalias() = delta * h.back().transpose();
  grad.b(last) = delta.rowwise().sum();
  RealMatrix dh = params.w(last).transpose() * delta;
  for (int l = c.hidden_layers; l >= 1; --l) {
    const RealMatrix dz =
        dh.cwiseProduct(activate_prime(c.activation, z[l - 1]));
    grad.w(l).noalias() = dz * h[l - 1].transpose();
    grad.b(l) = dz.rowwise().sum();
    if (c.residual) {
      dh += params.w(l).transpose() * dz;
    } else {
      dh = params.w(l).transpose() * dz;
    }
  }
  grad.w(0).noalias() = dh * x.transpose();
  grad.b(0) = dh.rowwise().sum();
  gradient = std::move(grad.data());
  return value;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning_rate must be > 0");
  }
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_epsilon > 0.0)) {
    throw std::invalid_argument("train: invalid Adam hyperparameters");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train: train_fraction must lie in (0, 1)");
  }
  if (patience < 0) throw std::invalid_argument("train: patience must be >= 0");
}

void adam_step(MlpParams& params, const RealVector& gradient, AdamState& state,
               const TrainConfig& config) {
  if (gradient.size() != params.size()) {
    throw std::invalid_argument("adam_step: gradient size mismatch");
  }
  if (state.m.size() != params.size()) {
    state.m = RealVector::Zero(params.size());
    state.v = RealVector::Zero(params.size());
    state.step = 0;
  }
  ++state.step;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  state.m = b1 * state.m + (1.0 - b1) * gradient;
  state.v = b2 * state.v + (1.0 - b2) * gradient.cwiseAbs2();
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  params.data().array() -=
      config.learning_rate * (state.m.array() / c1) /
      ((state.v.array() / c2).sqrt() + config.adam_epsilon);
  if (!params.data().allFinite()) {
    throw NumericalError("adam_step: parameters became non-finite");
  }
}

Standardizer Standardizer::identity(Eigen::Index dim) {
  return {RealVector::Zero(dim), RealVector::Ones(dim)};
}

Standardizer Standardizer::fit(const RealMatrix& columns) {
  const Eigen::Index d = columns.rows();
  const auto n = static_cast<double>(columns.cols());
  if (columns.cols() == 0) return identity(d);
  Standardizer s;
  s.mean = columns.rowwise().sum() / n;
  s.scale = ((columns.colwise() - s.mean).rowwise().squaredNorm() / n)
                .cwiseSqrt()
                .transpose();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(s.scale(i) >= 1e-12)) s.scale(i) = 1.0;
  }
  return s;
}

RealMatrix Standardizer::apply(const RealMatrix& columns) const {
  return (columns.colwise() - mean).array().colwise() / scale.array();
}

RealMatrix Standardizer::invert(const RealMatrix& columns) const {
  RealMatrix out = columns.array().colwise() * scale.array();
  out.colwise() += mean;
  return out;
}

RealMatrix SurrogateModel::predict_flat_batch(
    const RealMatrix& physical_params) const {
  return output.invert(forward_batch(params, input.apply(physical_params)));
}

RealVector SurrogateModel::predict_flat(const RealVector& physical_params) const {
  return predict_flat_batch(physical_params);
}

std::vector<AnsatzLayer> predict_ansatz(const SurrogateModel& model,
                                        const HamiltonianFamily& family,
                                        const RealVector& physical_params) {
  if (json::parse(model.family_json) != json::parse(family.metadata_json())) {
    throw std::invalid_argument("predict_ansatz: model was trained for " +
                                json::parse(model.family_json)
                                    .value("name", std::string("?")) +
                                ", not " + family.name());
  }
  if (model.layout.num_terms != family.num_terms()) {
    throw std::invalid_argument("predict_ansatz: layout term count mismatch");
  }
  return model.layout.unflatten(model.predict_flat(physical_params));
}

void save_model(const SurrogateModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = "kcqe-model";
  j["version"] = kModelFormatVersion;
  j["mlp"] = mlp_json(model.params.config());
  j["family"] = json::parse(model.family_json);
  json layout;
  layout["k"] = model.layout.k;
  layout["mode"] = std::string(to_string(model.layout.mode));
  layout["num_terms"] = model.layout.num_terms;
  j["layout"] = layout;
  j["input_mean"] = vector_json(model.input.mean);
  j["input_scale"] = vector_json(model.input.scale);
  j["output_mean"] = vector_json(model.output.mean);
  j["output_scale"] = vector_json(model.output.scale);
  j["config"] = json::parse(model.config_json);
  json blob;
  blob["dtype"] = "float64-le";
  blob["count"] = model.params.size();
  blob["order"] =
      "per dense layer (input projection, blocks in depth order, output "
      "projection): W row-major then b";
  blob["checksum"] = model.params.checksum();
  j["blob"] = blob;

  std::string text = j.dump();
  text += '\n';
  const std::size_t header = text.size();
  text.resize(header + 8 * static_cast<std::size_t>(model.params.size()));
  for (Eigen::Index i = 0; i < model.params.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(model.params.data()(i));
    for (int k = 0; k < 8; ++k) {
      text[header + 8 * static_cast<std::size_t>(i) + k] =
          static_cast<char>((bits >> (8 * k)) & 0xffU);
    }
  }
  write_text_file(path, text);
}

SurrogateModel load_model(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto nl = text.find('\n');
  if (nl == std::string::npos) {
    throw IoError(path.string() + ": missing model manifest line");
  }
  SurrogateModel model;
  try {
    const json j = json::parse(text.substr(0, nl));
    if (j.at("format").get<std::string>() != "kcqe-model") {
      throw std::invalid_argument("not a kcqe model file");
    }
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw std::invalid_argument("unsupported model format version");
    }
    model.params = MlpParams(mlp_from(j.at("mlp")));
    model.family_json = j.at("family").dump();
    const json& layout = j.at("layout");
    model.layout.k = layout.at("k").get<int>();
    model.layout.mode =
        ansatz_mode_from_string(layout.at("mode").get<std::string>());
    model.layout.num_terms = layout.at("num_terms").get<std::size_t>();
    model.input = {vector_from(j.at("input_mean")),
                   vector_from(j.at("input_scale"))};
    model.output = {vector_from(j.at("output_mean")),
                    vector_from(j.at("output_scale"))};
    model.config_json = j.at("config").dump();
    const auto count = j.at("blob").at("count").get<std::size_t>();
    if (count != static_cast<std::size_t>(model.params.size())) {
      throw std::invalid_argument("blob count disagrees with architecture");
    }
    if (text.size() != nl + 1 + 8 * count) {
      throw std::invalid_argument("blob has " +
                                  std::to_string(text.size() - nl - 1) +
                                  " bytes, expected " +
                                  std::to_string(8 * count));
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k) {
        bits |= static_cast<std::uint64_t>(
                    static_cast<unsigned char>(text[nl + 1 + 8 * i + k]))
                << (8 * k);
      }
      model.params.data()(static_cast<Eigen::Index>(i)) =
          std::bit_cast<double>(bits);
    }
    if (model.params.checksum() !=
        j.at("blob").at("checksum").get<std::string>()) {
      throw std::invalid_argument("weight checksum mismatch");
    }
    if (model.input.mean.size() != model.params.config().input_dim ||
        model.output.mean.size() != model.params.config().output_dim ||
        model.input.scale.size() != model.input.mean.size() ||
        model.output.scale.size() != model.output.mean.size()) {
      throw std::invalid_argument("standardization statistics have wrong size");
    }
    if (model.layout.length() !=
        static_cast<std::size_t>(model.params.config().output_dim)) {
      throw std::invalid_argument("layout length disagrees with output_dim");
    }
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return model;
}

bool TrainReport::operator==(const TrainReport& o) const {
  return train_loss == o.train_loss && validation_loss == o.validation_loss &&
         validation_param_mse == o.validation_param_mse &&
         monitor == o.monitor && best_epoch == o.best_epoch &&
         train_size == o.train_size && validation_size == o.validation_size &&
         stopped_early == o.stopped_early && checksum == o.checksum;
}

RealMatrix input_matrix(const std::vector<SampleRecord>& records) {
  if (records.empty()) return {};
  RealMatrix m(records.front().physical_params.size(),
               static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = records[i].physical_params;
  }
  return m;
}

RealMatrix target_matrix(const std::vector<SampleRecord>& records) {
  if (records.empty()) return {};
  RealMatrix m(records.front().flat_ansatz.size(),
               static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = records[i].flat_ansatz;
  }
  return m;
}

std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> training_split(
    const Dataset& dataset, const TrainConfig& tc) {
  std::vector<SampleRecord> usable;
  for (const auto& r : dataset.records) {
    if (!r.flagged() && r.flat_ansatz.allFinite()) usable.push_back(r);
  }
  return split(usable, tc.train_fraction, tc.split_seed);
}

TrainResult train(const Dataset& dataset, const MlpConfig& mlp,
                  const TrainConfig& tc, const EpochMonitor& monitor,
                  const EpochLogger& logger) {
  mlp.validate();
  tc.validate();
  const HamiltonianFamily family =
      family_from_metadata(dataset.manifest.family_json);
  if (mlp.input_dim != family.physical_param_dim()) {
    throw std::invalid_argument(
        "train: input_dim " + std::to_string(mlp.input_dim) +
        " does not match the family's " +
        std::to_string(family.physical_param_dim()) + " physical parameters");
  }
  if (static_cast<std::size_t>(mlp.output_dim) !=
      dataset.manifest.layout.length()) {
    throw std::invalid_argument(
        "train: output_dim " + std::to_string(mlp.output_dim) +
        " does not match the flat ansatz length " +
        std::to_string(dataset.manifest.layout.length()));
  }

  TrainResult result;
  auto [train_set, valid_set] = training_split(dataset, tc);
  if (train_set.empty() || valid_set.empty()) {
    throw std::invalid_argument(
        "train: need at least one training and one validation record (" +
        std::to_string(train_set.size() + valid_set.size()) + " usable)");
  }

  const RealMatrix x_train = input_matrix(train_set);
  const RealMatrix y_train = target_matrix(train_set);
  const RealMatrix x_valid = input_matrix(valid_set);
  const RealMatrix y_valid = target_matrix(valid_set);

  SurrogateModel& model = result.model;
  model.family_json = dataset.manifest.family_json;
  model.layout = dataset.manifest.layout;
  model.input = tc.standardize_inputs ? Standardizer::fit(x_train)
                                      : Standardizer::identity(x_train.rows());
  model.output = tc.standardize_outputs
                     ? Standardizer::fit(y_train)
                     : Standardizer::identity(y_train.rows());
  model.params = init(mlp);

  const RealMatrix xs_train = model.input.apply(x_train);
  const RealMatrix ys_train = model.output.apply(y_train);
  const RealMatrix xs_valid = model.input.apply(x_valid);
  const RealMatrix ys_valid = model.output.apply(y_valid);

  TrainReport& report = result.report;
  report.train_size = train_set.size();
  report.validation_size = valid_set.size();
  const auto start = std::chrono::steady_clock::now();

  MlpParams best = model.params;
  double best_loss = std::numeric_limits<double>::infinity();
  AdamState adam;
  RealVector grad;
  const auto n = static_cast<Eigen::Index>(train_set.size());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  int since_best = 0;

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    StreamRng rng(tc.seed, static_cast<std::uint64_t>(epoch));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    double epoch_loss = 0.0;
    try {
      for (Eigen::Index s = 0; s < n; s += tc.batch_size) {
        const Eigen::Index e = std::min<Eigen::Index>(n, s + tc.batch_size);
        const std::vector<Eigen::Index> cols(order.begin() + s,
                                             order.begin() + e);
        const double l = loss_and_gradient(
            model.params, gather(xs_train, cols), gather(ys_train, cols), grad);
        adam_step(model.params, grad, adam, tc);
        epoch_loss += l * static_cast<double>(e - s);
      }
    } catch (const NumericalError& err) {
      report.wall_seconds = elapsed();
      report.checksum = best.checksum();
      throw TrainingDiverged("training diverged in epoch " +
                                 std::to_string(epoch) + ": " + err.what(),
                             report);
    }
    const RealMatrix pred = forward_batch(model.params, xs_valid);
    const double vloss = mse(pred, ys_valid);
    report.train_loss.push_back(epoch_loss / static_cast<double>(n));
    report.validation_loss.push_back(vloss);
    report.validation_param_mse.push_back(
        mse(model.output.invert(pred), y_valid));
    if (vloss < best_loss) {
      best_loss = vloss;
      best = model.params;
      report.best_epoch = epoch;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (monitor) report.monitor.push_back(monitor(epoch, model));
    if (logger) logger(epoch, report);
    if (tc.patience > 0 && since_best >= tc.patience) {
      report.stopped_early = epoch < tc.epochs;
      break;
    }
  }

  model.params = std::move(best);
  report.checksum = model.params.checksum();
  report.wall_seconds = elapsed();
  result.train_records = std::move(train_set);
  result.validation_records = std::move(valid_set);
  return result;
}

}  // namespace kcqe
