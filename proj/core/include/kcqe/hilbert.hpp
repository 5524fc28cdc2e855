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
#include <span>
#include <unordered_map>
#include <vector>

#include "kcqe/numerics.hpp"

namespace kcqe {

// ---------------------------------------------------------------------------
// Qubits
// ---------------------------------------------------------------------------

struct QubitSpace {
  int num_qubits = 0;
  Eigen::Index dimension() const { return Eigen::Index{1} << num_qubits; }
};

/// sigma_{r1} (x) ... (x) sigma_{rM} with sigma_0 = I, 1 = X, 2 = Y, 3 = Z.
/// labels[0] acts on the most significant bit of the basis index.
ComplexMatrix pauli_string(std::span<const int> labels);

// ---------------------------------------------------------------------------
// Spinless fermions on a periodic ring
// ---------------------------------------------------------------------------

using OccupationMask = std::uint32_t;

/// Fixed-particle-number sector of L spinless-fermion modes. Site m
/// (1-based) is bit m-1 of the mask; basis masks are sorted ascending.
class FermionSector {
 public:
  FermionSector(int num_sites, int num_particles);

  int num_sites() const { return num_sites_; }
  int num_particles() const { return num_particles_; }
  Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(basis_.size());
  }
  const std::vector<OccupationMask>& basis() const { return basis_; }
  OccupationMask mask(Eigen::Index index) const { return basis_.at(index); }

  /// Basis index of `mask`, or -1 when the mask is outside the sector.
  Eigen::Index index_of(OccupationMask mask) const;

  /// Site following `site` on the ring (L wraps to 1).
  int next_site(int site) const { return site == num_sites_ ? 1 : site + 1; }

 private:
  int num_sites_;
  int num_particles_;
  std::vector<OccupationMask> basis_;
  std::unordered_map<OccupationMask, Eigen::Index> index_;
};

FermionSector build_fermion_sector(int num_sites, int num_particles);

/// Matrix of c^dag_j c_k (1-based sites) in the sector basis. The sign is
/// (-1)^s with s the number of occupied sites strictly between j and k.
ComplexMatrix hop_operator(const FermionSector& sector, int j, int k);

/// c^dag_m c_{m+1} + c^dag_{m+1} c_m on the periodic ring.
ComplexMatrix hopping_term(const FermionSector& sector, int m);

/// n_m n_{m+1} on the periodic ring (diagonal).
ComplexMatrix density_density_term(const FermionSector& sector, int m);

/// Diagonal number operator n_m.
ComplexMatrix number_operator(const FermionSector& sector, int m);

/// <state| c^dag_{m+1} c_m |state>.
Complex one_body_offdiagonal(const FermionSector& sector,
                             const StateVector& state, int m);

}  // namespace kcqe
