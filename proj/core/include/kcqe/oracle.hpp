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

#include "kcqe/hamiltonian.hpp"
#include "kcqe/numerics.hpp"

namespace kcqe {

inline constexpr Eigen::Index kDefaultOracleDimensionCap = 4096;

struct SpectrumResult {
  RealVector eigenvalues;  // ascending
  StateVector ground_state;  // phase-canonical
  double gap = 0.0;

  double ground_energy() const { return eigenvalues(0); }
};

/// Brute-force dense diagonalization of H(params). Throws
/// std::invalid_argument if the dimension exceeds `dimension_cap`.
SpectrumResult exact_ground(const HamiltonianFamily& family,
                            const RealVector& physical_params,
                            Eigen::Index dimension_cap =
                                kDefaultOracleDimensionCap);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace kcqe
