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

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kcqe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Raised when a floating-point computation leaves its valid domain
/// (state annihilated by a non-unitary factor, non-finite objective, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTolerance = 1e-12;

/// max_ij |M_ij - conj(M_ji)|. Throws if M is not square.
double max_hermitian_deviation(const ComplexMatrix& m);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

struct EigenDecomposition {
  RealVector eigenvalues;   // ascending
  ComplexMatrix eigenvectors;  // columns, unitary

  Eigen::Index dim() const { return eigenvalues.size(); }
};

/// Dense Hermitian eigendecomposition. Eigenvalues ascending; each
/// eigenvector is phase-fixed so its largest-magnitude entry (first on ties)
/// is real and positive.
///
/// Throws std::invalid_argument if `m` deviates from Hermitian by more than
/// `tolerance` (absolute, entrywise).
EigenDecomposition hermitian_eig(const ComplexMatrix& m,
                                 double tolerance = kHermitianTolerance);

/// Rotates the global phase of `v` so that its largest-magnitude amplitude
/// (lowest index on exact ties) is real and non-negative.
void canonicalize_phase(StateVector& v);

/// e^{scale * C} v using a precomputed spectral decomposition of C.
StateVector exp_action(const EigenDecomposition& eig, Complex scale,
                       const StateVector& v);

/// e^{scale * C} v for Hermitian C. Not normalized.
StateVector exp_hermitian_action(const ComplexMatrix& c, Complex scale,
                                 const StateVector& v);

/// Divided-difference kernel of the exponential in the eigenbasis of C:
///   K_ij = (e^{s l_i} - e^{s l_j}) / (s l_i - s l_j),  K_ii = e^{s l_i}.
/// The Frechet derivative of X -> e^X at X = sC in direction E is
/// V (K o (V^H E V)) V^H.
ComplexMatrix exp_derivative_kernel(const EigenDecomposition& eig,
                                    Complex scale);

using ScalarObjective = std::function<double(const RealVector&)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
/// Throws NumericalError naming the component when a probe is non-finite.
RealVector fd_gradient(const ScalarObjective& objective, const RealVector& x,
                       double step = 1e-6);

}  // namespace kcqe
