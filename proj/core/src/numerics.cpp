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

#include "kcqe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kcqe {

double max_hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("matrix is not square: " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void canonicalize_phase(StateVector& v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  double best_mag = std::abs(v(0));
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    // Strictly larger by more than round-off keeps the lowest index on ties.
    if (mag > best_mag * (1.0 + 1e-12) + 1e-300) {
      best = i;
      best_mag = mag;
    }
  }
  if (best_mag == 0.0) return;
  v *= std::conj(v(best)) / best_mag;
  v(best) = Complex(best_mag, 0.0);
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tolerance) {
  const double dev = max_hermitian_deviation(m);
  if (dev > tolerance) {
    std::ostringstream msg;
    msg << "hermitian_eig: matrix is not Hermitian (max |M - M^H| = " << dev
        << ")";
    throw std::invalid_argument(msg.str());
  }
  EigenDecomposition out;
  if (m.imag().isZero(0.0)) {
    // Real symmetric input goes through the real solver.
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m.real());
    if (solver.info() != Eigen::Success) {
      throw NumericalError("hermitian_eig: eigensolver did not converge");
    }
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("hermitian_eig: eigensolver did not converge");
    }
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
  }
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    StateVector col = out.eigenvectors.col(j);
    canonicalize_phase(col);
    out.eigenvectors.col(j) = col;
  }
  return out;
}

StateVector exp_action(const EigenDecomposition& eig, Complex scale,
                       const StateVector& v) {
  if (v.size() != eig.dim()) {
    throw std::invalid_argument("exp_action: dimension mismatch");
  }
  StateVector coeffs = eig.eigenvectors.adjoint() * v;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) *= std::exp(scale * eig.eigenvalues(i));
  }
  return eig.eigenvectors * coeffs;
}

StateVector exp_hermitian_action(const ComplexMatrix& c, Complex scale,
                                 const StateVector& v) {
  if (c.rows() != v.size()) {
    throw std::invalid_argument("exp_hermitian_action: dimension mismatch (" +
                                std::to_string(c.rows()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
  return exp_action(hermitian_eig(c), scale, v);
}

namespace {

// (e^{z} - 1) / z, stable near zero.
Complex expm1_over(Complex z) {
  if (std::abs(z) < 1e-5) {
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  }
  return (std::exp(z) - 1.0) / z;
}

// (1 - e^{-d}) / d for d >= 0.
double one_minus_exp_over(double d) {
  if (d < 1e-8) return 1.0 - d / 2.0;
  return -std::expm1(-d) / d;
}

// sin(x) / x.
double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

ComplexMatrix exp_derivative_kernel(const EigenDecomposition& eig,
                                    Complex scale) {
  const Eigen::Index n = eig.dim();
  const RealVector& lam = eig.eigenvalues;
  ComplexMatrix k(n, n);
  if (scale.imag() == 0.0) {
    // e^{max} (1 - e^{-|d|}) / |d| never overflows for finite results.
    const double s = scale.real();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double mi = s * lam(i);
        const double mj = s * lam(j);
        k(i, j) = std::exp(std::max(mi, mj)) *
                  one_minus_exp_over(std::abs(mi - mj));
      }
    }
  } else if (scale.real() == 0.0) {
    // e^{i w (l_i + l_j) / 2} sinc(w (l_i - l_j) / 2).
    const double w = scale.imag();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        k(i, j) = std::polar(sinc(0.5 * w * (lam(i) - lam(j))),
                             0.5 * w * (lam(i) + lam(j)));
      }
    }
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex ej = std::exp(scale * lam(j));
      for (Eigen::Index i = 0; i < n; ++i) {
        k(i, j) = ej * expm1_over(scale * (lam(i) - lam(j)));
      }
    }
  }
  return k;
}

RealVector fd_gradient(const ScalarObjective& objective, const RealVector& x,
                       double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("fd_gradient: step must be positive");
  }
  RealVector grad(x.size());
  RealVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double up = objective(probe);
    probe(i) = x(i) - step;
    const double down = objective(probe);
    probe(i) = x(i);
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalError("fd_gradient: non-finite objective at component " +
                           std::to_string(i));
    }
    grad(i) = (up - down) / (2.0 * step);
  }
  return grad;
}

}  // namespace kcqe
