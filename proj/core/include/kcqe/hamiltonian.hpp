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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcqe/hilbert.hpp"
#include "kcqe/numerics.hpp"

namespace kcqe {

enum class FamilyKind { kPauli, kHubbard };

/// H(f) = sum_l f_l h_l over a frozen list of Hermitian terms h_l. The
/// physical parameters (what a user or sampler supplies) map to the per-term
/// coefficients f_l through coefficients().
///
///  * Pauli family: 4^M Pauli strings in lexicographic label order; the
///    physical parameters are the coefficients themselves.
///  * Hubbard family: L hopping terms then L density-density terms on a
///    periodic ring with t = 1; the single physical parameter is U and the
///    coefficients are (-t, ..., -t, U, ..., U).
class HamiltonianFamily {
 public:
  FamilyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t num_terms() const { return terms_.size(); }
  Eigen::Index dimension() const;
  const std::vector<ComplexMatrix>& terms() const { return terms_; }
  const ComplexMatrix& term(std::size_t l) const { return terms_.at(l); }
  const std::vector<std::string>& term_labels() const { return term_labels_; }
  int physical_param_dim() const { return physical_param_dim_; }

  /// Pauli: qubit count. Hubbard: unset.
  int num_qubits() const { return num_qubits_; }
  /// Hubbard only.
  const std::optional<FermionSector>& sector() const { return sector_; }
  double hopping() const { return hopping_; }

  /// Per-term coefficients f_l. Throws on length mismatch.
  RealVector coefficients(const RealVector& physical_params) const;

  /// JSON object describing the family; term labels included verbatim.
  std::string metadata_json() const;

  friend HamiltonianFamily build_pauli_family(int num_qubits);
  friend HamiltonianFamily build_hubbard_family(int num_sites,
                                                int num_particles);

 private:
  HamiltonianFamily() = default;

  FamilyKind kind_ = FamilyKind::kPauli;
  std::string name_;
  std::vector<ComplexMatrix> terms_;
  std::vector<std::string> term_labels_;
  int physical_param_dim_ = 0;
  int num_qubits_ = 0;
  std::optional<FermionSector> sector_;
  double hopping_ = 1.0;
};

HamiltonianFamily build_pauli_family(int num_qubits);
HamiltonianFamily build_hubbard_family(int num_sites, int num_particles);

/// Rebuilds a family from metadata_json() output. Throws std::invalid_argument
/// if the stored term labels disagree with the rebuilt family.
HamiltonianFamily family_from_metadata(const std::string& json);

/// Sum_l f_l h_l for the given physical parameters.
ComplexMatrix assemble(const HamiltonianFamily& family,
                       const RealVector& physical_params);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct ParameterRegime {
  std::string name;
  std::vector<Interval> bounds;  // one per physical parameter
  std::uint64_t seed = 0;

  void validate() const;
};

/// The same interval for every one of `dim` parameters.
ParameterRegime uniform_regime(std::string name, int dim, Interval interval,
                               std::uint64_t seed);

/// The `index`-th draw of the regime. Each draw has its own counter stream
/// derived from (seed, index), so draws can be produced in any order.
RealVector sample_parameter(const ParameterRegime& regime,
                            std::uint64_t index);

/// Draws 0 .. count-1.
std::vector<RealVector> sample_parameters(const ParameterRegime& regime,
                                          std::size_t count);

struct GapEntry {
  RealVector params;
  double gap = 0.0;
};

struct GapScan {
  std::vector<GapEntry> entries;  // ascending by gap
  double min_gap() const { return entries.empty() ? 0.0 : entries.front().gap; }
};

/// Spectral gap E1 - E0 at `count` sampled points, sorted ascending.
GapScan gap_scan(const HamiltonianFamily& family, const ParameterRegime& regime,
                 std::size_t count);

}  // namespace kcqe
