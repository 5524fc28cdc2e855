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

#include "kcqe/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kcqe {

SpectrumResult exact_ground(const HamiltonianFamily& family,
                            const RealVector& physical_params,
                            Eigen::Index dimension_cap) {
  if (family.dimension() > dimension_cap) {
    throw std::invalid_argument(
        "exact_ground: dimension " + std::to_string(family.dimension()) +
        " exceeds the cap of " + std::to_string(dimension_cap));
  }
  const EigenDecomposition eig = hermitian_eig(assemble(family, physical_params));
  SpectrumResult out;
  out.eigenvalues = eig.eigenvalues;
  out.ground_state = eig.eigenvectors.col(0);
  canonicalize_phase(out.ground_state);
  out.gap = eig.dim() > 1
                ? std::max(0.0, eig.eigenvalues(1) - eig.eigenvalues(0))
                : 0.0;
  return out;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::norm(a.dot(b));
}

}  // namespace kcqe
