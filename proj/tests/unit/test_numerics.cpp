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


#include <gtest/gtest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "kcqe/numerics.hpp"
#include "kcqe/rng.hpp"

namespace kcqe {
namespace {

ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed,
                               double scale = 1.0) {
  StreamRng rng(seed, 0);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
  }
  return scale * (m + m.adjoint()) / 2.0;
}

StateVector random_state(Eigen::Index n, std::uint64_t seed) {
  StreamRng rng(seed, 1);
  StateVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  return v.normalized();
}

TEST(HermitianEig, ReconstructsMatrix) {
  const ComplexMatrix m = random_hermitian(12, 3);
  const EigenDecomposition e = hermitian_eig(m);
  const ComplexMatrix back = e.eigenvectors *
                             e.eigenvalues.cast<Complex>().asDiagonal() *
                             e.eigenvectors.adjoint();
  EXPECT_LT(max_abs(back - m), 1e-12);
  for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) {
    EXPECT_LE(e.eigenvalues(i - 1), e.eigenvalues(i));
  }
}

TEST(HermitianEig, RealSymmetricPathMatchesComplexPath) {
  ComplexMatrix m = random_hermitian(10, 5);
  m = m.real().cast<Complex>();
  const EigenDecomposition e = hermitian_eig(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(m);
  EXPECT_LT((e.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HermitianEig, RejectsNonHermitianWithDeviation) {
  ComplexMatrix m = random_hermitian(4, 7);
  m(0, 1) += 1e-6;
  try {
    hermitian_eig(m);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1e-06"), std::string::npos)
        << e.what();
  }
}

TEST(HermitianEig, AcceptsDeviationWithinTolerance) {
  ComplexMatrix m = random_hermitian(4, 7);
  m(0, 1) += 1e-13;
  EXPECT_NO_THROW(hermitian_eig(m));
}

TEST(HermitianEig, EigenvectorsArePhaseCanonical) {
  const EigenDecomposition e = hermitian_eig(random_hermitian(6, 11));
  for (Eigen::Index j = 0; j < e.dim(); ++j) {
    Eigen::Index arg = 0;
    e.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_EQ(e.eigenvectors(arg, j).imag(), 0.0);
    EXPECT_GT(e.eigenvectors(arg, j).real(), 0.0);
  }
}

TEST(CanonicalizePhase, InvariantUnderGlobalPhase) {
  StateVector v = random_state(8, 2);
  StateVector w = v * std::polar(1.0, 1.234);
  canonicalize_phase(v);
  canonicalize_phase(w);
  EXPECT_LT((v - w).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ExpAction, MatchesDenseMatrixExponential) {
  const ComplexMatrix m = random_hermitian(8, 13);
  const StateVector v = random_state(8, 13);
  for (Complex scale : {Complex(0.7, 0.0), Complex(0.0, -1.3),
                        Complex(0.2, 0.5)}) {
    const ComplexMatrix dense = (scale * m).exp();
    const StateVector expected = dense * v;
    const StateVector got = exp_hermitian_action(m, scale, v);
    EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExpAction, ImaginaryScalePreservesNorm) {
  const ComplexMatrix m = random_hermitian(16, 17, 5.0);
  const StateVector v = random_state(16, 17);
  EXPECT_NEAR(exp_hermitian_action(m, Complex(0, 1), v).norm(), 1.0, 1e-13);
}

TEST(ExpAction, RejectsDimensionMismatch) {
  EXPECT_THROW(exp_hermitian_action(random_hermitian(3, 1), 1.0,
                                    random_state(4, 1)),
               std::invalid_argument);
}

// d/dt exp(s (M + t D)) at t = 0 equals V (K o (V^H D V)) V^H.
void check_kernel(const ComplexMatrix& m, Complex scale) {
  const ComplexMatrix d = random_hermitian(m.rows(), 99);
  const EigenDecomposition e = hermitian_eig(m);
  const ComplexMatrix k = exp_derivative_kernel(e, scale);
  ASSERT_TRUE(k.allFinite());
  const ComplexMatrix dt = e.eigenvectors.adjoint() * d * e.eigenvectors;
  const ComplexMatrix analytic = scale * e.eigenvectors *
                                 k.cwiseProduct(dt) *
                                 e.eigenvectors.adjoint();
  const double h = 1e-6;
  const ComplexMatrix fd =
      ((scale * (m + h * d)).exp() - (scale * (m - h * d)).exp()) / (2 * h);
  const double ref = std::max(1.0, max_abs(fd));
  EXPECT_LT(max_abs(analytic - fd) / ref, 1e-6);
}

TEST(ExpDerivativeKernel, MatchesFiniteDifferenceRealScale) {
  check_kernel(random_hermitian(6, 21), Complex(0.8, 0.0));
}

TEST(ExpDerivativeKernel, MatchesFiniteDifferenceImaginaryScale) {
  check_kernel(random_hermitian(6, 22), Complex(0.0, 1.0));
}

TEST(ExpDerivativeKernel, MatchesFiniteDifferenceGeneralScale) {
  check_kernel(random_hermitian(5, 23), Complex(0.3, -0.6));
}

TEST(ExpDerivativeKernel, DegenerateEigenvaluesUseLimit) {
  const ComplexMatrix m = ComplexMatrix::Identity(4, 4) * 2.0;
  const EigenDecomposition e = hermitian_eig(m);
  const ComplexMatrix k = exp_derivative_kernel(e, 0.5);
  EXPECT_LT(max_abs(k - ComplexMatrix::Constant(4, 4, std::exp(1.0))), 1e-14);
}

TEST(ExpDerivativeKernel, FiniteForWideSpectrum) {
  // e^{s l} spans far more than the double range; entries must stay finite.
  RealVector lam(3);
  lam << -2000.0, 0.0, 1.0;
  EigenDecomposition e;
  e.eigenvalues = lam;
  e.eigenvectors = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix k = exp_derivative_kernel(e, 1.0);
  EXPECT_TRUE(k.allFinite());
  EXPECT_NEAR(k(0, 2).real(), (std::exp(1.0) - 0.0) / 2001.0, 1e-15);
  EXPECT_NEAR(k(1, 2).real(), std::exp(1.0) - 1.0, 1e-14);
}

TEST(FdGradient, QuadraticIsExact) {
  RealVector a(3);
  a << 1.0, -2.0, 0.5;
  const ScalarObjective f = [&](const RealVector& x) {
    return x.squaredNorm() + a.dot(x);
  };
  RealVector x(3);
  x << 0.3, 0.1, -0.7;
  const RealVector g = fd_gradient(f, x);
  EXPECT_LT((g - (2 * x + a)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FdGradient, NonFiniteProbeNamesComponent) {
  const ScalarObjective f = [](const RealVector& x) {
    return x(1) > 0.5 ? std::nan("") : x.sum();
  };
  RealVector x = RealVector::Constant(2, 0.5);
  try {
    fd_gradient(f, x);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("component 1"), std::string::npos);
  }
}

TEST(StreamRng, DeterministicAndStreamIndependent) {
  StreamRng a(42, 3);
  StreamRng b(42, 3);
  StreamRng c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(StreamRng, UniformStaysInsideOpenInterval) {
  StreamRng r(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = r.uniform(-0.2, 0.2);
    EXPECT_GT(x, -0.2);
    EXPECT_LT(x, 0.2);
  }
}

}  // namespace
}  // namespace kcqe
