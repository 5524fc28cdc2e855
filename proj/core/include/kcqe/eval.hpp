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
#include <vector>

#include "kcqe/cqe.hpp"
#include "kcqe/dataset.hpp"
#include "kcqe/surrogate.hpp"

namespace kcqe {

/// Trial state, then each layer in order; normalized and phase-canonical.
StateVector reconstruct(const HamiltonianFamily& family,
                        const RealVector& physical_params,
                        const std::vector<AnsatzLayer>& layers);

/// Hubbard only: |<c^dag_{m+1} c_m>| for m = 1..L.
RealVector bond_magnitudes(const HamiltonianFamily& family,
                           const StateVector& state);

/// The component of `state` in the exact ground eigenspace (eigenvalues
/// within `window` of E0), normalized. Falls back to the lowest eigenvector
/// when that component vanishes. Makes observables well defined when the
/// ground level is degenerate.
StateVector ground_space_reference(const HamiltonianFamily& family,
                                   const RealVector& physical_params,
                                   const StateVector& state,
                                   double window = 1e-9);

struct EvalRow {
  std::uint64_t index = 0;
  RealVector physical_params;
  double param_mse = 0.0;
  double energy = 0.0;
  double e_exact = 0.0;
  double abs_error = 0.0;
  double relative_error = 0.0;
  double observable = 0.0;      // bond mean of |<c^dag c>|, Hubbard only
  double observable_ref = 0.0;
  double observable_error = 0.0;
};

struct EvalMetrics {
  double param_mse = 0.0;
  double energy_mae = 0.0;
  double energy_relative_mean = 0.0;
  double observable_mae = 0.0;  // zero for families without the observable
  bool has_observable = false;
  std::vector<EvalRow> rows;
};

/// Scores predicted flat ansatz columns (one per record) against the stored
/// targets and the exact oracle. Aggregation order is the record order.
EvalMetrics evaluate_flat(const HamiltonianFamily& family,
                          const AnsatzLayout& layout,
                          const std::vector<SampleRecord>& records,
                          const RealMatrix& predicted, int workers = 1);

/// Throws std::invalid_argument on a family or layout mismatch.
EvalMetrics evaluate(const SurrogateModel& model,
                     const HamiltonianFamily& family,
                     const std::vector<SampleRecord>& records, int workers = 1);

/// Mean absolute energy error of reconstructed states on `records`.
EpochMonitor energy_monitor(const HamiltonianFamily& family,
                            std::vector<SampleRecord> records);

struct SweepRow {
  double u = 0.0;
  double exact = 0.0;
  std::vector<double> iteration_energy;  // one per layer
  std::vector<LbfgsStatus> status;

  double percent_error(std::size_t iteration) const;
};

/// Hubbard energies on a U grid, solved on `workers` threads.
std::vector<SweepRow> sweep(const HamiltonianFamily& family,
                            const std::vector<double>& u_grid, int k,
                            AnsatzMode mode, const CqeOptions& options = {},
                            int workers = 1);

/// lo, lo + step, ... up to hi inclusive (to 1e-9 step slack).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// loss_vs_epoch.csv, and energy_error_vs_epoch.csv when a monitor ran.
void export_training_curves(const TrainReport& report,
                            const std::filesystem::path& dir);
/// eval_rows.csv
void export_eval_rows(const EvalMetrics& metrics,
                      const std::filesystem::path& dir);
/// energy_vs_U.csv and percent_error_vs_U.csv
void export_sweep(const std::vector<SweepRow>& rows,
                  const std::filesystem::path& dir);

}  // namespace kcqe
