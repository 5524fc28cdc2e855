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


#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kcqe/dataset.hpp"
#include "kcqe/numerics.hpp"

namespace kcqe {

enum class Activation { kRelu, kTanh };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

struct MlpConfig {
  int input_dim = 1;
  int output_dim = 1;
  int hidden_width = 256;
  int hidden_layers = 6;
  bool residual = true;  // block: act(W h + b) + h
  Activation activation = Activation::kRelu;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const MlpConfig&) const = default;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// All weights in one contiguous vector. Dense layer i (0 = input
/// projection, 1..hidden_layers = blocks, last = output projection) stores
/// W (out x in, row-major) followed by b. That vector is also the on-disk
/// blob order.
class MlpParams {
 public:
  MlpParams() = default;
  explicit MlpParams(const MlpConfig& config);  // all zeros

  const MlpConfig& config() const { return config_; }
  int num_dense() const { return config_.hidden_layers + 2; }
  int in_dim(int layer) const;
  int out_dim(int layer) const;

  Eigen::Map<RowMajorMatrix> w(int layer);
  Eigen::Map<const RowMajorMatrix> w(int layer) const;
  Eigen::Map<RealVector> b(int layer);
  Eigen::Map<const RealVector> b(int layer) const;

  RealVector& data() { return data_; }
  const RealVector& data() const { return data_; }
  Eigen::Index size() const { return data_.size(); }

  /// FNV-1a over the little-endian bytes, 16 hex digits.
  std::string checksum() const;

  bool operator==(const MlpParams& o) const {
    return config_ == o.config_ && data_.size() == o.data_.size() &&
           data_ == o.data_;
  }

 private:
  MlpConfig config_;
  RealVector data_;
  std::vector<Eigen::Index> offsets_;  // start of each dense layer
};

/// Fan-in uniform weights U(-1/sqrt(in), 1/sqrt(in)), zero biases.
MlpParams init(const MlpConfig& config);

/// x is one sample.
RealVector forward(const MlpParams& params, const RealVector& x);
/// Columns of `x` are samples.
RealMatrix forward_batch(const MlpParams& params, const RealMatrix& x);

/// Mean over samples and outputs of the squared error; gradient in the same
/// layout as params. Throws NumericalError on a non-finite loss.
double loss_and_gradient(const MlpParams& params, const RealMatrix& x,
                         const RealMatrix& y, RealVector& gradient);

double loss(const MlpParams& params, const RealMatrix& x, const RealMatrix& y);

struct TrainConfig {
  double learning_rate = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int batch_size = 256;
  int epochs = 1000;
  std::uint64_t seed = 0;          // batch order
  std::uint64_t split_seed = 0;    // train/validation split
  double train_fraction = 0.9;
  bool standardize_inputs = true;
  bool standardize_outputs = true;
  int patience = 0;  // epochs without validation improvement; 0 = never stop

  void validate() const;
};

struct AdamState {
  RealVector m;
  RealVector v;
  std::int64_t step = 0;
};

/// Bias-corrected Adam update in place.
void adam_step(MlpParams& params, const RealVector& gradient, AdamState& state,
               const TrainConfig& config);

/// Per-component affine map to zero mean, unit variance. Components with
/// std below 1e-12 keep scale 1.
struct Standardizer {
  RealVector mean;
  RealVector scale;

  static Standardizer identity(Eigen::Index dim);
  static Standardizer fit(const RealMatrix& columns);

  RealMatrix apply(const RealMatrix& columns) const;
  RealMatrix invert(const RealMatrix& columns) const;
  bool operator==(const Standardizer& o) const {
    return mean == o.mean && scale == o.scale;
  }
};

/// A trained network plus everything needed to use it on raw inputs.
struct SurrogateModel {
  MlpParams params;
  Standardizer input;
  Standardizer output;
  std::string family_json;
  AnsatzLayout layout;
  std::string config_json = "{}";

  /// Raw physical parameters in, raw flat ansatz out.
  RealVector predict_flat(const RealVector& physical_params) const;
  RealMatrix predict_flat_batch(const RealMatrix& physical_params) const;
};

/// Throws std::invalid_argument if the model was trained for another family
/// or layout.
std::vector<AnsatzLayer> predict_ansatz(const SurrogateModel& model,
                                        const HamiltonianFamily& family,
                                        const RealVector& physical_params);

void save_model(const SurrogateModel& model, const std::filesystem::path& path);
SurrogateModel load_model(const std::filesystem::path& path);

struct TrainReport {
  std::vector<double> train_loss;       // standardized space, epoch mean
  std::vector<double> validation_loss;  // standardized space
  std::vector<double> validation_param_mse;  // raw flat-ansatz space
  std::vector<double> monitor;  // per-epoch value of the optional monitor
  int best_epoch = 0;  // 1-based
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  bool stopped_early = false;
  double wall_seconds = 0.0;  // excluded from equality
  std::string checksum;  // of the retained parameters

  bool operator==(const TrainReport& o) const;
};

struct TrainResult {
  SurrogateModel model;
  TrainReport report;
  std::vector<SampleRecord> train_records;
  std::vector<SampleRecord> validation_records;
};

/// Called after every epoch with the current (not the best) model.
using EpochMonitor = std::function<double(int epoch, const SurrogateModel&)>;
/// Called after every epoch for logging.
using EpochLogger = std::function<void(int epoch, const TrainReport&)>;

class TrainingDiverged : public NumericalError {
 public:
  TrainingDiverged(const std::string& what, TrainReport report)
      : NumericalError(what), report_(std::move(report)) {}
  const TrainReport& report() const { return report_; }

 private:
  TrainReport report_;
};

/// Drops flagged or non-finite rows, then split(..., train_fraction,
/// split_seed). Exactly the partition train() uses.
std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> training_split(
    const Dataset& dataset, const TrainConfig& train_config);

/// Flagged rows are dropped, the rest split by train_config. Input and
/// output dimensions in `mlp` must match the dataset.
TrainResult train(const Dataset& dataset, const MlpConfig& mlp,
                  const TrainConfig& train_config,
                  const EpochMonitor& monitor = {},
                  const EpochLogger& logger = {});

/// Columns of physical parameters / flat ansatz for a record set.
RealMatrix input_matrix(const std::vector<SampleRecord>& records);
RealMatrix target_matrix(const std::vector<SampleRecord>& records);

}  // namespace kcqe
