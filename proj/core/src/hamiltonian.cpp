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

#include "kcqe/hamiltonian.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "kcqe/rng.hpp"

namespace kcqe {

using json = nlohmann::ordered_json;

Eigen::Index HamiltonianFamily::dimension() const {
  return terms_.empty() ? 0 : terms_.front().rows();
}

RealVector HamiltonianFamily::coefficients(
    const RealVector& physical_params) const {
  if (physical_params.size() != physical_param_dim_) {
    throw std::invalid_argument(
        "family " + name_ + ": expected " +
        std::to_string(physical_param_dim_) + " physical parameters, got " +
        std::to_string(physical_params.size()));
  }
  if (kind_ == FamilyKind::kPauli) return physical_params;

  const std::size_t sites = num_terms() / 2;
  RealVector f(num_terms());
  f.head(sites).setConstant(-hopping_);
  f.tail(sites).setConstant(physical_params(0));
  return f;
}

std::string HamiltonianFamily::metadata_json() const {
  json j;
  j["name"] = name_;
  if (kind_ == FamilyKind::kPauli) {
    j["kind"] = "pauli";
    j["num_qubits"] = num_qubits_;
  } else {
    j["kind"] = "hubbard";
    j["L"] = sector_->num_sites();
    j["N"] = sector_->num_particles();
    j["t"] = hopping_;
  }
  j["physical_param_dim"] = physical_param_dim_;
  j["term_labels"] = term_labels_;
  return j.dump();
}

HamiltonianFamily build_pauli_family(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 6) {
    throw std::invalid_argument("build_pauli_family: M must lie in [1, 6]");
  }
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  HamiltonianFamily family;
  family.kind_ = FamilyKind::kPauli;
  family.name_ = "pauli" + std::to_string(num_qubits);
  family.num_qubits_ = num_qubits;

  std::size_t count = std::size_t{1} << (2 * num_qubits);
  std::vector<int> labels(num_qubits);
  for (std::size_t index = 0; index < count; ++index) {
    std::string label(num_qubits, 'I');
    std::size_t rest = index;
    for (int q = num_qubits - 1; q >= 0; --q) {
      labels[q] = static_cast<int>(rest % 4);
      label[q] = kNames[labels[q]];
      rest /= 4;
    }
    family.terms_.push_back(pauli_string(labels));
    family.term_labels_.push_back(std::move(label));
  }
  family.physical_param_dim_ = static_cast<int>(count);
  return family;
}

HamiltonianFamily build_hubbard_family(int num_sites, int num_particles) {
  if (num_sites < 3) {
    throw std::invalid_argument("build_hubbard_family: need L >= 3");
  }
  if (num_particles < 1 || num_particles >= num_sites) {
    throw std::invalid_argument("build_hubbard_family: need 1 <= N < L");
  }
  HamiltonianFamily family;
  family.kind_ = FamilyKind::kHubbard;
  family.name_ = "hubbard_L" + std::to_string(num_sites) + "_N" +
                 std::to_string(num_particles);
  family.sector_.emplace(num_sites, num_particles);
  const FermionSector& sector = *family.sector_;

  for (int m = 1; m <= num_sites; ++m) {
    family.terms_.push_back(hopping_term(sector, m));
    family.term_labels_.push_back("hop(" + std::to_string(m) + "," +
                                  std::to_string(sector.next_site(m)) + ")");
  }
  for (int m = 1; m <= num_sites; ++m) {
    family.terms_.push_back(density_density_term(sector, m));
    family.term_labels_.push_back("nn(" + std::to_string(m) + "," +
                                  std::to_string(sector.next_site(m)) + ")");
  }
  family.physical_param_dim_ = 1;
  return family;
}

HamiltonianFamily family_from_metadata(const std::string& text) {
  const json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  HamiltonianFamily family =
      kind == "pauli"     ? build_pauli_family(j.at("num_qubits").get<int>())
      : kind == "hubbard" ? build_hubbard_family(j.at("L").get<int>(),
                                                 j.at("N").get<int>())
                          : throw std::invalid_argument(
                                "unknown family kind: " + kind);
  if (j.contains("term_labels") &&
      j.at("term_labels").get<std::vector<std::string>>() !=
          family.term_labels()) {
    throw std::invalid_argument("family metadata: term order mismatch for " +
                                family.name());
  }
  return family;
}

ComplexMatrix assemble(const HamiltonianFamily& family,
                       const RealVector& physical_params) {
  const RealVector f = family.coefficients(physical_params);
  const Eigen::Index dim = family.dimension();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t l = 0; l < family.num_terms(); ++l) {
    if (f(l) != 0.0) h += f(l) * family.term(l);
  }
  return h;
}

void ParameterRegime::validate() const {
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (!(bounds[i].lower < bounds[i].upper)) {
      throw std::invalid_argument("regime " + name + ": interval " +
                                  std::to_string(i) + " is empty");
    }
  }
}

ParameterRegime uniform_regime(std::string name, int dim, Interval interval,
                               std::uint64_t seed) {
  ParameterRegime regime{std::move(name),
                         std::vector<Interval>(dim, interval), seed};
  regime.validate();
  return regime;
}

RealVector sample_parameter(const ParameterRegime& regime,
                            std::uint64_t index) {
  StreamRng rng(regime.seed, index);
  RealVector x(static_cast<Eigen::Index>(regime.bounds.size()));
  for (std::size_t c = 0; c < regime.bounds.size(); ++c) {
    x(c) = rng.uniform(regime.bounds[c].lower, regime.bounds[c].upper);
  }
  return x;
}

std::vector<RealVector> sample_parameters(const ParameterRegime& regime,
                                          std::size_t count) {
  regime.validate();
  std::vector<RealVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample_parameter(regime, i));
  }
  return out;
}

GapScan gap_scan(const HamiltonianFamily& family, const ParameterRegime& regime,
                 std::size_t count) {
  GapScan scan;
  for (auto& params : sample_parameters(regime, count)) {
    const EigenDecomposition eig = hermitian_eig(assemble(family, params));
    const double gap =
        eig.dim() > 1 ? eig.eigenvalues(1) - eig.eigenvalues(0) : 0.0;
    scan.entries.push_back({std::move(params), std::max(gap, 0.0)});
  }
  std::stable_sort(scan.entries.begin(), scan.entries.end(),
                   [](const GapEntry& a, const GapEntry& b) {
                     return a.gap < b.gap;
                   });
  return scan;
}

}  // namespace kcqe
