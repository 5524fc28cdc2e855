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


#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "kcqe/dataset.hpp"
#include "kcqe/eval.hpp"
#include "kcqe/format.hpp"
#include "kcqe/oracle.hpp"
#include "kcqe/surrogate.hpp"

namespace kcqe::cli {

namespace {

json vec(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v(i))) {
      a.push_back(v(i));
    } else {
      a.push_back(nullptr);
    }
  }
  return a;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void echo_config(const RunConfig& config, const char* command) {
  write_text_file(config.output_dir / (std::string(command) + "_config.json"),
                  config.effective.dump(2) + "\n");
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// Rejects a dataset or model built for another family, k or mode.
void check_family(const RunConfig& config, const HamiltonianFamily& family,
                  const std::string& stored_family_json,
                  const AnsatzLayout& layout, const std::string& what) {
  if (json::parse(stored_family_json) != json::parse(family.metadata_json())) {
    const json stored = json::parse(stored_family_json);
    throw ConfigError(what + " was built for family " +
                      stored.value("name", std::string("?")) +
                      " but the config selects " + family.name());
  }
  if (layout.k != config.k || layout.mode != config.mode) {
    throw ConfigError(what + " has k=" + std::to_string(layout.k) + " mode=" +
                      std::string(to_string(layout.mode)) +
                      " but the config asks for k=" + std::to_string(config.k) +
                      " mode=" + std::string(to_string(config.mode)));
  }
}

double ground_overlap(const SpectrumResult& ref, const HamiltonianFamily& family,
                      const RealVector& params, const StateVector& state) {
  const EigenDecomposition eig = hermitian_eig(assemble(family, params));
  Eigen::Index g = 1;
  while (g < eig.dim() && eig.eigenvalues(g) - ref.ground_energy() <= 1e-9) ++g;
  return (eig.eigenvectors.leftCols(g).adjoint() * state).squaredNorm();
}

}  // namespace

int cmd_solve(const RunConfig& config) {
  const HamiltonianFamily family = config.family();
  RealVector params;
  if (auto p = config.solve_params(family)) {
    params = *p;
  } else if (auto index = config.solve_sample_index()) {
    params = sample_parameter(config.regime(family), *index);
  } else {
    throw ConfigError(
        "solve needs physical parameters (--U / --params) or --sample-index");
  }
  echo_config(config, "solve");

  const CqeSolution sol =
      solve_kcqe(family, params, config.k, config.mode, config.solver);
  const SpectrumResult ref = exact_ground(family, params);
  const double e0 = ref.ground_energy();
  const double rel = std::abs(sol.energy() - e0) / std::abs(e0);

  std::printf("family %s  k=%d  mode=%s\n", family.name().c_str(), config.k,
              std::string(to_string(config.mode)).c_str());
  std::printf("trial      E = %s\n", format_double(sol.trial_energy).c_str());
  json iterations = json::array();
  for (std::size_t n = 0; n < sol.per_iteration.size(); ++n) {
    const auto& it = sol.per_iteration[n];
    std::printf("iteration %zu E = %s  variance = %.3e  status = %s (%d steps)\n",
                n + 1, format_double(it.energy).c_str(), it.variance,
                std::string(to_string(it.status)).c_str(),
                it.optimizer_iterations);
    json j;
    j["energy"] = it.energy;
    j["variance"] = it.variance;
    j["status"] = std::string(to_string(it.status));
    j["optimizer_iterations"] = it.optimizer_iterations;
    j["gradient_inf_norm"] = it.gradient_inf_norm;
    j["a"] = vec(sol.layers[n].a);
    j["b"] = vec(sol.layers[n].b);
    iterations.push_back(j);
  }
  const double overlap = ground_overlap(ref, family, params, sol.final_state);
  std::printf("E_cqe   = %s\nE_exact = %s\nrelative_error = %.6e\n"
              "ground_space_overlap = %.12f\n",
              format_double(sol.energy()).c_str(), format_double(e0).c_str(),
              rel, overlap);

  json out;
  out["config"] = config.effective;
  out["family"] = json::parse(family.metadata_json());
  out["physical_params"] = vec(params);
  out["trial_energy"] = sol.trial_energy;
  out["iterations"] = iterations;
  out["e_cqe"] = sol.energy();
  out["e_exact"] = e0;
  out["relative_error"] = rel;
  out["ground_space_overlap"] = overlap;
  write_json(config.output_dir / "solve.json", out);
  return 0;
}

namespace {

// The run config embedded in artifacts, minus settings that only affect
// where and how fast it ran, so reruns reproduce the artifact byte for byte.
std::string artifact_config(const RunConfig& config) {
  json c = config.effective;
  c.erase("workers");
  c.erase("output_dir");
  for (const char* section : {"dataset", "model"}) {
    if (c.contains(section)) c[section].erase("path");
  }
  return c.dump();
}

}  // namespace

int cmd_gen(const RunConfig& config) {
  const HamiltonianFamily family = config.family();
  const ParameterRegime regime = config.regime(family);
  const auto path = config.dataset_path();
  echo_config(config, "gen");
  const Dataset ds =
      generate(family, regime, config.k, config.mode, config.count(),
               config.solver, config.workers, artifact_config(config));
  save(ds, path);

  std::size_t flagged = 0;
  double rel = 0.0;
  std::size_t finite = 0;
  for (const auto& r : ds.records) {
    if (r.flagged()) ++flagged;
    if (std::isfinite(r.e_cqe)) {
      rel += std::abs(r.e_cqe - r.e_exact) / std::abs(r.e_exact);
      ++finite;
    }
  }
  std::printf("wrote %zu records to %s (%zu flagged)\n", ds.records.size(),
              path.string().c_str(), flagged);
  if (finite > 0) {
    std::printf("mean relative energy error %.6e\n",
                rel / static_cast<double>(finite));
  }
  return 0;
}

int cmd_train(const RunConfig& config) {
  const HamiltonianFamily family = config.family();
  const Dataset ds = load(config.dataset_path());
  check_family(config, family, ds.manifest.family_json, ds.manifest.layout,
               "dataset " + config.dataset_path().string());
  const MlpConfig mlp =
      config.mlp(family.physical_param_dim(),
                 static_cast<int>(ds.manifest.layout.length()));
  const TrainConfig tc = config.train();
  echo_config(config, "train");

  EpochMonitor monitor;
  if (config.monitor_samples() > 0) {
    auto valid = training_split(ds, tc).second;
    if (valid.size() > static_cast<std::size_t>(config.monitor_samples())) {
      valid.resize(static_cast<std::size_t>(config.monitor_samples()));
    }
    monitor = energy_monitor(family, std::move(valid));
  }
  const int every = config.log_every();
  EpochLogger logger = [every](int epoch, const TrainReport& r) {
    if (every > 0 && (epoch % every == 0 || epoch == 1)) {
      std::printf("epoch %d train_loss %.6e validation_loss %.6e", epoch,
                  r.train_loss.back(), r.validation_loss.back());
      if (!r.monitor.empty()) {
        std::printf(" energy_mae %.6e", r.monitor.back());
      }
      std::printf("\n");
      std::fflush(stdout);
    }
  };

  TrainResult result = train(ds, mlp, tc, monitor, logger);
  result.model.config_json = artifact_config(config);
  save_model(result.model, config.model_path());
  export_training_curves(result.report, config.output_dir);

  const TrainReport& r = result.report;
  json out;
  out["config"] = config.effective;
  out["train_size"] = r.train_size;
  out["validation_size"] = r.validation_size;
  out["epochs_run"] = r.train_loss.size();
  out["best_epoch"] = r.best_epoch;
  out["stopped_early"] = r.stopped_early;
  out["train_loss"] = r.train_loss;
  out["validation_loss"] = r.validation_loss;
  out["validation_param_mse"] = r.validation_param_mse;
  out["energy_mae_monitor"] = r.monitor;
  out["wall_seconds"] = r.wall_seconds;
  out["checksum"] = r.checksum;
  write_json(config.output_dir / "train_report.json", out);
  std::printf("best epoch %d of %zu, validation_loss %.6e, model %s\n",
              r.best_epoch, r.train_loss.size(),
              r.validation_loss[static_cast<std::size_t>(r.best_epoch - 1)],
              config.model_path().string().c_str());
  return 0;
}

int cmd_eval(const RunConfig& config) {
  const HamiltonianFamily family = config.family();
  const SurrogateModel model = load_model(config.model_path());
  const Dataset ds = load(config.dataset_path());
  check_family(config, family, model.family_json, model.layout,
               "model " + config.model_path().string());
  check_family(config, family, ds.manifest.family_json, ds.manifest.layout,
               "dataset " + config.dataset_path().string());
  const std::string which = config.eval_split();
  echo_config(config, "eval");

  std::vector<SampleRecord> records;
  if (which == "all") {
    for (const auto& r : ds.records) {
      if (!r.flagged()) records.push_back(r);
    }
  } else {
    // The split the model was trained with, read back from its own config.
    const json stored = json::parse(model.config_json);
    TrainConfig tc;
    tc.split_seed = required_seed(stored, "/train/split_seed");
    tc.train_fraction =
        stored.at(json::json_pointer("/train/train_fraction")).get<double>();
    auto parts = training_split(ds, tc);
    records = which == "train" ? parts.first : parts.second;
  }
  const EvalMetrics m = evaluate(model, family, records, config.workers);
  export_eval_rows(m, config.output_dir);

  json out;
  out["config"] = config.effective;
  out["split"] = which;
  out["records"] = m.rows.size();
  out["param_mse"] = num(m.param_mse);
  out["energy_mae"] = num(m.energy_mae);
  out["energy_relative_mean"] = num(m.energy_relative_mean);
  if (m.has_observable) out["observable_mae"] = num(m.observable_mae);
  write_json(config.output_dir / "metrics.json", out);
  std::printf("records %zu  param_mse %.6e  energy_mae %.6e  "
              "energy_relative_mean %.6e",
              m.rows.size(), m.param_mse, m.energy_mae, m.energy_relative_mean);
  if (m.has_observable) std::printf("  observable_mae %.6e", m.observable_mae);
  std::printf("\n");
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  const HamiltonianFamily family = config.family();
  if (family.kind() != FamilyKind::kHubbard) {
    throw ConfigError("sweep runs over U and needs --family hubbard");
  }
  const std::vector<double> grid = config.sweep_grid();
  echo_config(config, "sweep");
  const std::vector<SweepRow> rows =
      sweep(family, grid, config.k, config.mode, config.solver, config.workers);
  export_sweep(rows, config.output_dir);

  json out;
  out["config"] = config.effective;
  json jr = json::array();
  std::vector<double> mean_error(static_cast<std::size_t>(config.k), 0.0);
  for (const auto& r : rows) {
    json j;
    j["U"] = r.u;
    j["exact"] = r.exact;
    j["iteration_energy"] = r.iteration_energy;
    json st = json::array();
    for (auto s : r.status) st.push_back(std::string(to_string(s)));
    j["status"] = st;
    jr.push_back(j);
    for (std::size_t i = 0; i < mean_error.size(); ++i) {
      mean_error[i] += r.percent_error(i) / static_cast<double>(rows.size());
    }
  }
  out["rows"] = jr;
  out["mean_percent_error"] = mean_error;
  write_json(config.output_dir / "sweep.json", out);
  std::printf("%zu grid points\n", rows.size());
  for (std::size_t i = 0; i < mean_error.size(); ++i) {
    std::printf("iteration %zu mean percent error %.6e\n", i + 1,
                mean_error[i]);
  }
  return 0;
}

}  // namespace kcqe::cli
