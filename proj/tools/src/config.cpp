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


#include "config.hpp"


#include "kcqe/eval.hpp"
#include "kcqe/format.hpp"

namespace kcqe::cli {

namespace {

const json& at(const json& j, const std::string& pointer) {
  const json::json_pointer p(pointer);
  if (!j.contains(p)) throw ConfigError("missing config key " + pointer);
  return j.at(p);
}

template <typename T>
T get(const json& j, const std::string& pointer) {
  const json& v = at(j, pointer);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key " + pointer + " has the wrong type (" +
                      v.dump() + ")");
  }
}

int get_int(const json& j, const std::string& pointer, int min_value) {
  const json& v = at(j, pointer);
  if (!v.is_number_integer()) {
    throw ConfigError("config key " + pointer + " must be an integer, got " +
                      v.dump());
  }
  const auto x = v.get<long long>();
  if (x < min_value) {
    throw ConfigError("config key " + pointer + " must be >= " +
                      std::to_string(min_value) + ", got " + v.dump());
  }
  return static_cast<int>(x);
}

double get_real(const json& j, const std::string& pointer) {
  const json& v = at(j, pointer);
  if (!v.is_number()) {
    throw ConfigError("config key " + pointer + " must be a number, got " +
                      v.dump());
  }
  return v.get<double>();
}

std::filesystem::path path_or_default(const json& j, const std::string& pointer,
                                      const std::filesystem::path& out,
                                      const char* fallback) {
  const json& v = at(j, pointer);
  if (v.is_null() || (v.is_string() && v.get<std::string>().empty())) {
    return out / fallback;
  }
  if (!v.is_string()) throw ConfigError("config key " + pointer + " must be a path");
  return v.get<std::string>();
}

}  // namespace

json default_config() {
  return json::parse(R"({
    "family": {"kind": "hubbard", "L": 9, "N": 2, "M": 2},
    "regime": {"name": "default", "lower": 0.0, "upper": 20.0,
               "bounds": null, "seed": null},
    "k": 2,
    "mode": "hermitian",
    "solver": {"memory": 10, "max_iterations": 500,
               "gradient_tolerance": 1e-9, "armijo_c1": 1e-4,
               "shrink": 0.5, "min_step": 1e-16,
               "relative_decrease_tolerance": 1e-12, "max_step_norm": 1.0,
               "gradient": "analytic", "fd_step": 1e-6, "ridge": 1e-7},
    "dataset": {"count": 100, "path": null},
    "model": {"path": null},
    "mlp": {"hidden_width": 256, "hidden_layers": 6, "residual": true,
            "activation": "relu", "seed": null},
    "train": {"learning_rate": 1e-4, "adam_beta1": 0.9, "adam_beta2": 0.999,
              "adam_epsilon": 1e-8, "batch_size": 256, "epochs": 1000,
              "train_fraction": 0.9, "standardize_inputs": true,
              "standardize_outputs": true, "patience": 0,
              "monitor_samples": 200, "log_every": 1,
              "seed": null, "split_seed": null},
    "solve": {"params": null, "sample_index": null},
    "sweep": {"u_min": 0.0, "u_max": 20.0, "u_step": 0.5},
    "eval": {"split": "validation"},
    "workers": 1,
    "output_dir": "kcqe_out"
  })");
}

void merge_into(json& base, const json& patch) {
  if (!patch.is_object() || !base.is_object()) {
    base = patch;
    return;
  }
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() &&
        it.value().is_object()) {
      merge_into(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

json read_config_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError(path.string() + ": not a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::uint64_t required_seed(const json& effective, const std::string& pointer) {
  const json& v = at(effective, pointer);
  if (v.is_null()) {
    throw ConfigError("seed " + pointer +
                      " is not set; every seed must be given explicitly");
  }
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError("seed " + pointer + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

RunConfig parse_run_config(json effective) {
  RunConfig c;
  c.family_kind = get<std::string>(effective, "/family/kind");
  if (c.family_kind == "pauli") {
    c.num_qubits = get_int(effective, "/family/M", 1);
    if (c.num_qubits > 6) throw ConfigError("/family/M must be <= 6");
  } else if (c.family_kind == "hubbard") {
    c.num_sites = get_int(effective, "/family/L", 3);
    c.num_particles = get_int(effective, "/family/N", 1);
    if (c.num_particles >= c.num_sites) {
      throw ConfigError("/family/N must be < /family/L");
    }
  } else {
    throw ConfigError("/family/kind must be pauli or hubbard, got '" +
                      c.family_kind + "'");
  }
  c.k = get_int(effective, "/k", 1);
  try {
    c.mode = ansatz_mode_from_string(get<std::string>(effective, "/mode"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  LbfgsOptions& o = c.solver.lbfgs;
  o.memory = get_int(effective, "/solver/memory", 1);
  o.max_iterations = get_int(effective, "/solver/max_iterations", 0);
  o.gradient_tolerance = get_real(effective, "/solver/gradient_tolerance");
  o.armijo_c1 = get_real(effective, "/solver/armijo_c1");
  o.shrink = get_real(effective, "/solver/shrink");
  o.min_step = get_real(effective, "/solver/min_step");
  o.relative_decrease_tolerance =
      get_real(effective, "/solver/relative_decrease_tolerance");
  o.max_step_norm = get_real(effective, "/solver/max_step_norm");
  try {
    o.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto gradient = get<std::string>(effective, "/solver/gradient");
  if (gradient == "analytic") {
    c.solver.gradient = GradientSupply::kAnalytic;
  } else if (gradient == "finite_difference") {
    c.solver.gradient = GradientSupply::kFiniteDifference;
  } else {
    throw ConfigError(
        "/solver/gradient must be analytic or finite_difference, got '" +
        gradient + "'");
  }
  c.solver.fd_step = get_real(effective, "/solver/fd_step");
  if (!(c.solver.fd_step > 0.0)) throw ConfigError("/solver/fd_step must be > 0");
  c.solver.ridge = get_real(effective, "/solver/ridge");
  if (!(c.solver.ridge >= 0.0)) throw ConfigError("/solver/ridge must be >= 0");
  c.workers = get_int(effective, "/workers", 1);
  c.output_dir = get<std::string>(effective, "/output_dir");
  if (c.output_dir.empty()) throw ConfigError("/output_dir must not be empty");
  c.effective = std::move(effective);
  return c;
}

HamiltonianFamily RunConfig::family() const {
  if (family_kind == "pauli") return build_pauli_family(num_qubits);
  return build_hubbard_family(num_sites, num_particles);
}

ParameterRegime RunConfig::regime(const HamiltonianFamily& family) const {
  ParameterRegime r;
  r.name = get<std::string>(effective, "/regime/name");
  r.seed = required_seed(effective, "/regime/seed");
  const json& bounds = at(effective, "/regime/bounds");
  if (bounds.is_null()) {
    const Interval box{get_real(effective, "/regime/lower"),
                       get_real(effective, "/regime/upper")};
    r.bounds.assign(static_cast<std::size_t>(family.physical_param_dim()), box);
  } else {
    if (!bounds.is_array() ||
        bounds.size() != static_cast<std::size_t>(family.physical_param_dim())) {
      throw ConfigError("/regime/bounds must list " +
                        std::to_string(family.physical_param_dim()) +
                        " [lower, upper] pairs");
    }
    for (const auto& b : bounds) {
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() ||
          !b[1].is_number()) {
        throw ConfigError("/regime/bounds entries must be [lower, upper]");
      }
      r.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
    }
  }
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return r;
}

std::size_t RunConfig::count() const {
  return static_cast<std::size_t>(get_int(effective, "/dataset/count", 0));
}

std::filesystem::path RunConfig::dataset_path() const {
  return path_or_default(effective, "/dataset/path", output_dir,
                         "dataset.jsonl");
}

std::filesystem::path RunConfig::model_path() const {
  return path_or_default(effective, "/model/path", output_dir, "model.kcqe");
}

MlpConfig RunConfig::mlp(int input_dim, int output_dim) const {
  MlpConfig m;
  m.input_dim = input_dim;
  m.output_dim = output_dim;
  m.hidden_width = get_int(effective, "/mlp/hidden_width", 1);
  m.hidden_layers = get_int(effective, "/mlp/hidden_layers", 0);
  m.residual = get<bool>(effective, "/mlp/residual");
  try {
    m.activation =
        activation_from_string(get<std::string>(effective, "/mlp/activation"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  m.seed = required_seed(effective, "/mlp/seed");
  return m;
}

TrainConfig RunConfig::train() const {
  TrainConfig t;
  t.learning_rate = get_real(effective, "/train/learning_rate");
  t.adam_beta1 = get_real(effective, "/train/adam_beta1");
  t.adam_beta2 = get_real(effective, "/train/adam_beta2");
  t.adam_epsilon = get_real(effective, "/train/adam_epsilon");
  t.batch_size = get_int(effective, "/train/batch_size", 1);
  t.epochs = get_int(effective, "/train/epochs", 1);
  t.train_fraction = get_real(effective, "/train/train_fraction");
  t.standardize_inputs = get<bool>(effective, "/train/standardize_inputs");
  t.standardize_outputs = get<bool>(effective, "/train/standardize_outputs");
  t.patience = get_int(effective, "/train/patience", 0);
  t.seed = required_seed(effective, "/train/seed");
  t.split_seed = required_seed(effective, "/train/split_seed");
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

int RunConfig::monitor_samples() const {
  return get_int(effective, "/train/monitor_samples", 0);
}

int RunConfig::log_every() const {
  return get_int(effective, "/train/log_every", 0);
}

std::optional<RealVector> RunConfig::solve_params(
    const HamiltonianFamily& family) const {
  const json& p = at(effective, "/solve/params");
  if (p.is_null()) return std::nullopt;
  std::vector<double> values;
  if (p.is_number()) {
    values.push_back(p.get<double>());
  } else if (p.is_array()) {
    for (const auto& v : p) {
      if (!v.is_number()) throw ConfigError("/solve/params must be numbers");
      values.push_back(v.get<double>());
    }
  } else {
    throw ConfigError("/solve/params must be a number or an array");
  }
  if (values.size() != static_cast<std::size_t>(family.physical_param_dim())) {
    throw ConfigError("/solve/params has " + std::to_string(values.size()) +
                      " entries, family " + family.name() + " needs " +
                      std::to_string(family.physical_param_dim()));
  }
  return Eigen::Map<const RealVector>(values.data(),
                                      static_cast<Eigen::Index>(values.size()));
}

std::optional<std::uint64_t> RunConfig::solve_sample_index() const {
  const json& v = at(effective, "/solve/sample_index");
  if (v.is_null()) return std::nullopt;
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("/solve/sample_index must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> RunConfig::sweep_grid() const {
  const double lo = get_real(effective, "/sweep/u_min");
  const double hi = get_real(effective, "/sweep/u_max");
  const double step = get_real(effective, "/sweep/u_step");
  if (hi == lo) return {lo};
  if (!(step > 0.0) || !(hi > lo)) {
    throw ConfigError("/sweep needs u_max >= u_min and u_step > 0");
  }
  return uniform_grid(lo, hi, step);
}

std::string RunConfig::eval_split() const {
  const auto s = get<std::string>(effective, "/eval/split");
  if (s != "validation" && s != "train" && s != "all") {
    throw ConfigError("/eval/split must be validation, train or all");
  }
  return s;
}

}  // namespace kcqe::cli
