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

// k-iteration contracted quantum eigensolver.
//
// Each iteration n applies one layer
//
//   |Psi_n> = e^{B_n} e^{i A_n} |Psi_{n-1}> / norm,
//   A_n = sum_l a_l h_l,   B_n = sum_l b_l h_l,
//
// where h_l are the family's Hermitian terms and a, b are real. The unitary
// factor acts first. The coefficients of layer n are found by minimizing
// the energy of |Psi_n> starting from a = b = 0; earlier layers stay frozen.

#pragma once

#include <string_view>
#include <vector>

#include "kcqe/hamiltonian.hpp"
#include "kcqe/lbfgs.hpp"
#include "kcqe/numerics.hpp"

namespace kcqe {

enum class AnsatzMode {
  kFull,       // unitary and Hermitian generators
  kUnitary,    // b == 0
  kHermitian,  // a == 0 (HCQE)
};

std::string_view to_string(AnsatzMode mode);
/// Accepts "full", "unitary", "hermitian". Throws std::invalid_argument.
AnsatzMode ansatz_mode_from_string(std::string_view name);

/// Number of generators optimized per layer (1 or 2).
int active_generators(AnsatzMode mode);

struct AnsatzLayer {
  RealVector a;  // unitary generator coefficients, one per term
  RealVector b;  // Hermitian generator coefficients, one per term

  static AnsatzLayer zero(std::size_t num_terms);
  bool operator==(const AnsatzLayer&) const = default;
};

enum class GradientSupply { kAnalytic, kFiniteDifference };

struct CqeOptions {
  // Capped steps keep the optimizer from leaping along near-flat valleys of
  // the layer energy, which otherwise scatters equivalent solutions far
  // apart for neighbouring Hamiltonians.
  LbfgsOptions lbfgs{.max_step_norm = 1.0};
  GradientSupply gradient = GradientSupply::kAnalytic;
  double fd_step = 1e-6;
  // The layer minimizes E(theta) + ridge / 2 |theta|^2. Along directions
  // where E is flat the Hermitian coefficients otherwise drift without
  // bound and the parameters stop depending smoothly on f.
  double ridge = 1e-7;
};

struct IterationRecord {
  double energy = 0.0;
  double variance = 0.0;
  LbfgsStatus status = LbfgsStatus::kConverged;
  int optimizer_iterations = 0;
  double gradient_inf_norm = 0.0;
};

struct CqeSolution {
  AnsatzMode mode = AnsatzMode::kHermitian;
  StateVector trial;
  double trial_energy = 0.0;
  std::vector<AnsatzLayer> layers;
  StateVector final_state;  // normalized, phase-canonical
  std::vector<IterationRecord> per_iteration;

  double energy() const {
    return per_iteration.empty() ? trial_energy : per_iteration.back().energy;
  }
  bool any_flagged() const;
};

/// Hubbard: ground state of H(U = 0), phase-canonical. Pauli: |0...0>.
StateVector trial_state(const HamiltonianFamily& family,
                        const RealVector& physical_params);

/// e^{B} e^{iA} state, normalized. Throws NumericalError if the Hermitian
/// factor collapses the norm below 1e-14.
StateVector apply_layer(const HamiltonianFamily& family,
                        const AnsatzLayer& layer, const StateVector& state);

/// <state|H|state> for normalized state.
double expectation(const ComplexMatrix& h, const StateVector& state);

/// <H^2> - <H>^2, negative round-off clamped to zero.
double variance(const HamiltonianFamily& family,
                const RealVector& physical_params, const StateVector& state);

/// Real (symmetrized) ground-state residual of the contracted equation:
///   r_l = Re<state|h_l H|state> - <H><state|h_l|state>.
/// Satisfies sum_l f_l r_l = variance.
RealVector cse_residual(const HamiltonianFamily& family,
                        const RealVector& physical_params,
                        const StateVector& state);

/// Energy of one candidate layer on a fixed incoming state, as a function of
/// the mode's active coefficients theta (a then b).
class LayerObjective {
 public:
  LayerObjective(const HamiltonianFamily& family,
                 const RealVector& physical_params, StateVector state,
                 AnsatzMode mode);

  Eigen::Index num_parameters() const;
  /// Energy; +inf if the layer annihilates the state.
  double value(const RealVector& theta) const;
  /// Energy and analytic gradient.
  double value_and_gradient(const RealVector& theta, RealVector& grad) const;

  AnsatzLayer unpack(const RealVector& theta) const;
  RealVector pack(const AnsatzLayer& layer) const;

 private:
  const HamiltonianFamily& family_;
  ComplexMatrix hamiltonian_;
  StateVector state_;
  AnsatzMode mode_;
};

struct LayerResult {
  AnsatzLayer layer;
  double energy = 0.0;
  LbfgsResult optimizer;
};

LayerResult minimize_layer(const HamiltonianFamily& family,
                           const RealVector& physical_params,
                           const StateVector& state, AnsatzMode mode,
                           const CqeOptions& options = {});

/// Runs k iterations from the trial state.
CqeSolution solve_kcqe(const HamiltonianFamily& family,
                       const RealVector& physical_params, int k,
                       AnsatzMode mode, const CqeOptions& options = {});

}  // namespace kcqe
