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


#include "kcqe/eval.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"
#include "kcqe/format.hpp"
#include "kcqe/oracle.hpp"
#include "parallel.hpp"

namespace kcqe {

namespace {

double mean(const std::vector<EvalRow>& rows, double EvalRow::*field) {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.*field;
  return s / static_cast<double>(rows.size());
}

}  // namespace

StateVector reconstruct(const HamiltonianFamily& family,
                        const RealVector& physical_params,
                        const std::vector<AnsatzLayer>& layers) {
  StateVector state = trial_state(family, physical_params);
  for (const auto& layer : layers) state = apply_layer(family, layer, state);
  state.normalize();
  canonicalize_phase(state);
  return state;
}

RealVector bond_magnitudes(const HamiltonianFamily& family,
                           const StateVector& state) {
  if (!family.sector()) {
    throw std::invalid_argument("bond_magnitudes: family " + family.name() +
                                " has no lattice");
  }
  const FermionSector& sector = *family.sector();
  RealVector out(sector.num_sites());
  for (int m = 1; m <= sector.num_sites(); ++m) {
    out(m - 1) = std::abs(one_body_offdiagonal(sector, state, m));
  }
  return out;
}

StateVector ground_space_reference(const HamiltonianFamily& family,
                                   const RealVector& physical_params,
                                   const StateVector& state, double window) {
  const EigenDecomposition eig =
      hermitian_eig(assemble(family, physical_params));
  const double e0 = eig.eigenvalues(0);
  Eigen::Index g = 1;
  while (g < eig.dim() && eig.eigenvalues(g) - e0 <= window) ++g;
  const auto basis = eig.eigenvectors.leftCols(g);
  StateVector projected = basis * (basis.adjoint() * state);
  const double norm = projected.norm();
  if (norm < 1e-8) {
    projected = eig.eigenvectors.col(0);
  } else {
    projected /= norm;
  }
  canonicalize_phase(projected);
  return projected;
}

EvalMetrics evaluate_flat(const HamiltonianFamily& family,
                          const AnsatzLayout& layout,
                          const std::vector<SampleRecord>& records,
                          const RealMatrix& predicted, int workers) {
  if (layout.num_terms != family.num_terms()) {
    throw std::invalid_argument("evaluate: layout term count " +
                                std::to_string(layout.num_terms) +
                                " does not match family " + family.name());
  }
  if (predicted.cols() != static_cast<Eigen::Index>(records.size()) ||
      (predicted.cols() > 0 &&
       predicted.rows() != static_cast<Eigen::Index>(layout.length()))) {
    throw std::invalid_argument("evaluate: prediction matrix has wrong shape");
  }
  EvalMetrics metrics;
  metrics.has_observable = family.sector().has_value();
  metrics.rows.resize(records.size());
  detail::parallel_for(records.size(), workers, [&](std::size_t i) {
    const SampleRecord& rec = records[i];
    const RealVector flat = predicted.col(static_cast<Eigen::Index>(i));
    EvalRow& row = metrics.rows[i];
    row.index = rec.index;
    row.physical_params = rec.physical_params;
    row.param_mse = (flat - rec.flat_ansatz).squaredNorm() /
                    static_cast<double>(std::max<Eigen::Index>(flat.size(), 1));
    const StateVector state =
        reconstruct(family, rec.physical_params, layout.unflatten(flat));
    row.energy = expectation(assemble(family, rec.physical_params), state);
    row.e_exact = rec.e_exact;
    row.abs_error = std::abs(row.energy - row.e_exact);
    row.relative_error = row.abs_error / std::abs(row.e_exact);
    if (metrics.has_observable) {
      const StateVector ref =
          ground_space_reference(family, rec.physical_params, state);
      row.observable = bond_magnitudes(family, state).mean();
      row.observable_ref = bond_magnitudes(family, ref).mean();
      row.observable_error = std::abs(row.observable - row.observable_ref);
    }
  });
  metrics.param_mse = mean(metrics.rows, &EvalRow::param_mse);
  metrics.energy_mae = mean(metrics.rows, &EvalRow::abs_error);
  metrics.energy_relative_mean = mean(metrics.rows, &EvalRow::relative_error);
  metrics.observable_mae = mean(metrics.rows, &EvalRow::observable_error);
  return metrics;
}

EvalMetrics evaluate(const SurrogateModel& model,
                     const HamiltonianFamily& family,
                     const std::vector<SampleRecord>& records, int workers) {
  using json = nlohmann::ordered_json;
  if (json::parse(model.family_json) != json::parse(family.metadata_json())) {
    throw std::invalid_argument("evaluate: model family does not match " +
                                family.name());
  }
  for (const auto& r : records) {
    if (r.physical_params.size() != family.physical_param_dim() ||
        r.flat_ansatz.size() != static_cast<Eigen::Index>(model.layout.length())) {
      throw std::invalid_argument(
          "evaluate: record " + std::to_string(r.index) +
          " does not match the model layout");
    }
  }
  const RealMatrix pred = records.empty()
                              ? RealMatrix(model.layout.length(), 0)
                              : model.predict_flat_batch(input_matrix(records));
  return evaluate_flat(family, model.layout, records, pred, workers);
}

EpochMonitor energy_monitor(const HamiltonianFamily& family,
                            std::vector<SampleRecord> records) {
  return [&family, records = std::move(records)](int,
                                                 const SurrogateModel& model) {
    const RealMatrix pred = model.predict_flat_batch(input_matrix(records));
    double total = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const StateVector s = reconstruct(
          family, records[i].physical_params,
          model.layout.unflatten(pred.col(static_cast<Eigen::Index>(i))));
      total += std::abs(
          expectation(assemble(family, records[i].physical_params), s) -
          records[i].e_exact);
    }
    return records.empty() ? 0.0 : total / static_cast<double>(records.size());
  };
}

double SweepRow::percent_error(std::size_t iteration) const {
  return 100.0 * std::abs(iteration_energy.at(iteration) - exact) /
         std::abs(exact);
}

std::vector<SweepRow> sweep(const HamiltonianFamily& family,
                            const std::vector<double>& u_grid, int k,
                            AnsatzMode mode, const CqeOptions& options,
                            int workers) {
  if (family.kind() != FamilyKind::kHubbard) {
    throw std::invalid_argument("sweep: needs a Hubbard family");
  }
  if (k < 1) throw std::invalid_argument("sweep: k must be >= 1");
  std::vector<SweepRow> rows(u_grid.size());
  detail::parallel_for(u_grid.size(), workers, [&](std::size_t i) {
    RealVector p(1);
    p << u_grid[i];
    SweepRow& row = rows[i];
    row.u = u_grid[i];
    row.exact = exact_ground(family, p).ground_energy();
    const CqeSolution sol = solve_kcqe(family, p, k, mode, options);
    for (const auto& it : sol.per_iteration) {
      row.iteration_energy.push_back(it.energy);
      row.status.push_back(it.status);
    }
  });
  return rows;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("uniform_grid: need step > 0 and hi >= lo");
  }
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

void export_training_curves(const TrainReport& report,
                            const std::filesystem::path& dir) {
  std::vector<std::vector<double>> rows;
  for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
    rows.push_back({static_cast<double>(e + 1), report.train_loss[e],
                    report.validation_loss[e],
                    report.validation_param_mse[e]});
  }
  write_csv(dir / "loss_vs_epoch.csv",
            {"epoch", "train_loss", "validation_loss", "validation_param_mse"},
            rows);
  if (!report.monitor.empty()) {
    rows.clear();
    for (std::size_t e = 0; e < report.monitor.size(); ++e) {
      rows.push_back({static_cast<double>(e + 1), report.monitor[e]});
    }
    write_csv(dir / "energy_error_vs_epoch.csv", {"epoch", "energy_mae"}, rows);
  }
}

void export_eval_rows(const EvalMetrics& metrics,
                      const std::filesystem::path& dir) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : metrics.rows) {
    rows.push_back({static_cast<double>(r.index), r.param_mse, r.energy,
                    r.e_exact, r.abs_error, r.relative_error, r.observable,
                    r.observable_ref, r.observable_error});
  }
  write_csv(dir / "eval_rows.csv",
            {"index", "param_mse", "energy", "e_exact", "abs_error",
             "relative_error", "observable", "observable_ref",
             "observable_error"},
            rows);
}

void export_sweep(const std::vector<SweepRow>& rows,
                  const std::filesystem::path& dir) {
  const std::size_t k = rows.empty() ? 0 : rows.front().iteration_energy.size();
  std::vector<std::string> energy_header{"U", "exact"};
  std::vector<std::string> error_header{"U"};
  for (std::size_t i = 1; i <= k; ++i) {
    energy_header.push_back("iter" + std::to_string(i));
    error_header.push_back("iter" + std::to_string(i) + "_percent_error");
  }
  std::vector<std::vector<double>> energies;
  std::vector<std::vector<double>> errors;
  for (const auto& r : rows) {
    std::vector<double> e{r.u, r.exact};
    std::vector<double> p{r.u};
    for (std::size_t i = 0; i < k; ++i) {
      e.push_back(r.iteration_energy[i]);
      p.push_back(r.percent_error(i));
    }
    energies.push_back(std::move(e));
    errors.push_back(std::move(p));
  }
  write_csv(dir / "energy_vs_U.csv", energy_header, energies);
  write_csv(dir / "percent_error_vs_U.csv", error_header, errors);
}

}  // namespace kcqe
