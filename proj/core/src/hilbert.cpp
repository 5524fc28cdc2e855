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

#include "kcqe/hilbert.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace kcqe {

namespace {

ComplexMatrix single_pauli(int label) {
  const Complex i(0.0, 1.0);
  ComplexMatrix p(2, 2);
  switch (label) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default:
      throw std::invalid_argument("pauli_string: invalid label " +
                                  std::to_string(label));
  }
  return p;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix pauli_string(std::span<const int> labels) {
  if (labels.empty()) {
    throw std::invalid_argument("pauli_string: need at least one qubit");
  }
  ComplexMatrix out = single_pauli(labels[0]);
  for (std::size_t q = 1; q < labels.size(); ++q) {
    out = kron(out, single_pauli(labels[q]));
  }
  return out;
}

FermionSector::FermionSector(int num_sites, int num_particles)
    : num_sites_(num_sites), num_particles_(num_particles) {
  if (num_sites < 1 || num_sites > 30) {
    throw std::invalid_argument("FermionSector: num_sites must lie in [1, 30]");
  }
  if (num_particles < 0 || num_particles > num_sites) {
    throw std::invalid_argument("FermionSector: need 0 <= N <= L");
  }
  const OccupationMask end = OccupationMask{1} << num_sites;
  for (OccupationMask mask = 0; mask < end; ++mask) {
    if (std::popcount(mask) == num_particles) {
      index_.emplace(mask, static_cast<Eigen::Index>(basis_.size()));
      basis_.push_back(mask);
    }
  }
}

Eigen::Index FermionSector::index_of(OccupationMask mask) const {
  const auto it = index_.find(mask);
  return it == index_.end() ? -1 : it->second;
}

FermionSector build_fermion_sector(int num_sites, int num_particles) {
  return FermionSector(num_sites, num_particles);
}

namespace {

void check_site(const FermionSector& sector, int site, const char* where) {
  if (site < 1 || site > sector.num_sites()) {
    throw std::invalid_argument(std::string(where) + ": site " +
                                std::to_string(site) + " outside [1, " +
                                std::to_string(sector.num_sites()) + "]");
  }
}

OccupationMask bit(int site) { return OccupationMask{1} << (site - 1); }

// Occupied sites strictly between j and k.
int sites_between(OccupationMask mask, int j, int k) {
  const int lo = std::min(j, k);
  const int hi = std::max(j, k);
  if (hi - lo < 2) return 0;
  const OccupationMask window = (bit(hi) - 1) & ~((bit(lo) << 1) - 1);
  return std::popcount(mask & window);
}

}  // namespace

ComplexMatrix hop_operator(const FermionSector& sector, int j, int k) {
  check_site(sector, j, "hop_operator");
  check_site(sector, k, "hop_operator");
  const Eigen::Index dim = sector.dimension();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const OccupationMask mask = sector.mask(col);
    if (j == k) {
      if (mask & bit(j)) out(col, col) = 1.0;
      continue;
    }
    if (!(mask & bit(k)) || (mask & bit(j))) continue;
    const OccupationMask target = (mask & ~bit(k)) | bit(j);
    const Eigen::Index row = sector.index_of(target);
    if (row < 0) {
      throw std::logic_error("hop_operator: mask left the particle sector");
    }
    out(row, col) = (sites_between(mask, j, k) % 2 == 0) ? 1.0 : -1.0;
  }
  return out;
}

ComplexMatrix hopping_term(const FermionSector& sector, int m) {
  check_site(sector, m, "hopping_term");
  const int next = sector.next_site(m);
  if (next == m) {
    return ComplexMatrix::Zero(sector.dimension(), sector.dimension());
  }
  return hop_operator(sector, m, next) + hop_operator(sector, next, m);
}

ComplexMatrix density_density_term(const FermionSector& sector, int m) {
  check_site(sector, m, "density_density_term");
  const OccupationMask pair = bit(m) | bit(sector.next_site(m));
  const Eigen::Index dim = sector.dimension();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if ((sector.mask(i) & pair) == pair) out(i, i) = 1.0;
  }
  return out;
}

ComplexMatrix number_operator(const FermionSector& sector, int m) {
  check_site(sector, m, "number_operator");
  return hop_operator(sector, m, m);
}

Complex one_body_offdiagonal(const FermionSector& sector,
                             const StateVector& state, int m) {
  check_site(sector, m, "one_body_offdiagonal");
  if (state.size() != sector.dimension()) {
    throw std::invalid_argument("one_body_offdiagonal: dimension mismatch");
  }
  const ComplexMatrix op = hop_operator(sector, sector.next_site(m), m);
  return state.dot(op * state);
}

}  // namespace kcqe
