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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kcqe/cqe.hpp"
#include "kcqe/hamiltonian.hpp"
#include "kcqe/surrogate.hpp"

namespace kcqe::cli {

using json = nlohmann::ordered_json;

/// Bad or missing configuration; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every key with its default. Seeds have no default on purpose.
json default_config();

/// Recursive object merge; values in `patch` win, objects merge key-wise.
void merge_into(json& base, const json& patch);

/// Reads a JSON document; ConfigError on parse failure.
json read_config_file(const std::filesystem::path& path);

/// Typed view of the effective config.
struct RunConfig {
  json effective;

  std::string family_kind;  // "pauli" or "hubbard"
  int num_qubits = 0;
  int num_sites = 0;
  int num_particles = 0;

  int k = 1;
  AnsatzMode mode = AnsatzMode::kHermitian;
  CqeOptions solver;
  int workers = 1;
  std::filesystem::path output_dir;

  HamiltonianFamily family() const;
  /// ConfigError if the regime seed is missing or the bounds are invalid.
  ParameterRegime regime(const HamiltonianFamily& family) const;

  std::size_t count() const;
  std::filesystem::path dataset_path() const;
  std::filesystem::path model_path() const;

  MlpConfig mlp(int input_dim, int output_dim) const;
  TrainConfig train() const;
  int monitor_samples() const;
  int log_every() const;

  /// solve: explicit parameters, or the sample index of the regime.
  std::optional<RealVector> solve_params(const HamiltonianFamily& family) const;
  std::optional<std::uint64_t> solve_sample_index() const;

  std::vector<double> sweep_grid() const;
  std::string eval_split() const;
};

/// Validates and types `effective`; ConfigError on any problem.
RunConfig parse_run_config(json effective);

/// Required unsigned integer at a JSON pointer, ConfigError naming it.
std::uint64_t required_seed(const json& effective, const std::string& pointer);

}  // namespace kcqe::cli
