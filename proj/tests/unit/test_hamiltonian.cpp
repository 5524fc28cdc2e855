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

#include "kcqe/hamiltonian.hpp"
#include "kcqe/oracle.hpp"

namespace kcqe {
namespace {

RealVector u_param(double u) {
  RealVector p(1);
  p << u;
  return p;
}

TEST(PauliFamily, SixteenLexicographicTerms) {
  const HamiltonianFamily f = build_pauli_family(2);
  ASSERT_EQ(f.num_terms(), 16u);
  EXPECT_EQ(f.term_labels().front(), "II");
  EXPECT_EQ(f.term_labels()[1], "IX");
  EXPECT_EQ(f.term_labels().back(), "ZZ");
  EXPECT_EQ(f.physical_param_dim(), 16);
  EXPECT_EQ(f.dimension(), 4);
  EXPECT_EQ(f.name(), "pauli2");
}

TEST(PauliFamily, TermsAreTraceOrthogonal) {
  const HamiltonianFamily f = build_pauli_family(2);
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t b = 0; b < 16; ++b) {
      const Complex tr = (f.term(a) * f.term(b)).trace();
      EXPECT_NEAR(std::abs(tr), a == b ? 4.0 : 0.0, 1e-15);
    }
  }
}

TEST(PauliFamily, RejectsBadQubitCount) {
  EXPECT_THROW(build_pauli_family(0), std::invalid_argument);
  EXPECT_THROW(build_pauli_family(7), std::invalid_argument);
}

TEST(HubbardFamily, TermsAndCoefficients) {
  const HamiltonianFamily f = build_hubbard_family(9, 2);
  ASSERT_EQ(f.num_terms(), 18u);
  EXPECT_EQ(f.term_labels()[0], "hop(1,2)");
  EXPECT_EQ(f.term_labels()[8], "hop(9,1)");
  EXPECT_EQ(f.term_labels()[9], "nn(1,2)");
  EXPECT_EQ(f.dimension(), 36);
  const RealVector c = f.coefficients(u_param(3.5));
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(c(i), -1.0);
    EXPECT_EQ(c(9 + i), 3.5);
  }
  EXPECT_THROW(f.coefficients(RealVector::Zero(2)), std::invalid_argument);
}

TEST(HubbardFamily, RejectsInvalidLattice) {
  EXPECT_THROW(build_hubbard_family(2, 1), std::invalid_argument);
  EXPECT_THROW(build_hubbard_family(5, 5), std::invalid_argument);
  EXPECT_THROW(build_hubbard_family(5, 0), std::invalid_argument);
}

TEST(Assemble, IsHermitianLinearCombination) {
  const HamiltonianFamily f = build_pauli_family(2);
  RealVector p = RealVector::LinSpaced(16, -1.0, 1.0);
  const ComplexMatrix h = assemble(f, p);
  ComplexMatrix ref = ComplexMatrix::Zero(4, 4);
  for (int l = 0; l < 16; ++l) ref += p(l) * f.term(l);
  EXPECT_EQ(max_abs(h - ref), 0.0);
  EXPECT_LT(max_hermitian_deviation(h), 1e-15);
}

TEST(FamilyMetadata, RoundTripsAndDetectsTampering) {
  for (const auto& f : {build_pauli_family(2), build_hubbard_family(5, 2)}) {
    const HamiltonianFamily back = family_from_metadata(f.metadata_json());
    EXPECT_EQ(back.name(), f.name());
    EXPECT_EQ(back.term_labels(), f.term_labels());
  }
  std::string meta = build_hubbard_family(5, 2).metadata_json();
  meta.replace(meta.find("hop(1,2)"), 8, "hop(2,1)");
  EXPECT_THROW(family_from_metadata(meta), std::invalid_argument);
}

TEST(Regime, DrawsStayInBoundsAndAreDeterministic) {
  const ParameterRegime r = uniform_regime("r1", 16, {-0.2, 0.2}, 42);
  const auto a = sample_parameters(r, 200);
  const auto b = sample_parameters(r, 200);
  ASSERT_EQ(a.size(), 200u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_GT(a[i].minCoeff(), -0.2);
    EXPECT_LT(a[i].maxCoeff(), 0.2);
  }
  // Index-addressable: draw 17 alone equals the 17th of the sequence.
  EXPECT_EQ(sample_parameter(r, 17), a[17]);
  const auto c = sample_parameters(uniform_regime("r1", 16, {-0.2, 0.2}, 43), 1);
  EXPECT_NE(c[0], a[0]);
}

TEST(Regime, ValidationRejectsEmptyInterval) {
  EXPECT_THROW(uniform_regime("bad", 1, {1.0, 1.0}, 0), std::invalid_argument);
  ParameterRegime r{"reversed", {{2.0, 1.0}}, 0};
  EXPECT_THROW(r.validate(), std::invalid_argument);
}

TEST(GapScan, SortedAscendingAndPositiveForQubitRegimes) {
  const HamiltonianFamily f = build_pauli_family(2);
  const GapScan s1 = gap_scan(f, uniform_regime("r1", 16, {-0.2, 0.2}, 1), 200);
  ASSERT_EQ(s1.entries.size(), 200u);
  for (std::size_t i = 1; i < s1.entries.size(); ++i) {
    EXPECT_LE(s1.entries[i - 1].gap, s1.entries[i].gap);
  }
  EXPECT_GT(s1.min_gap(), 0.0);
  const GapScan s2 =
      gap_scan(f, uniform_regime("r2", 16, {-3.8, -1.2}, 1), 200);
  EXPECT_GT(s2.min_gap(), 5.0);
}

TEST(GapScan, EvenParticleRingGroundStateIsDegenerate) {
  // Momenta +K and -K give the same energy for N = 2 on a periodic ring.
  const HamiltonianFamily f = build_hubbard_family(5, 2);
  EXPECT_LT(exact_ground(f, u_param(1.0)).gap, 1e-9);
  const GapScan s = gap_scan(f, uniform_regime("u", 1, {0.0, 20.0}, 3), 10);
  EXPECT_LT(s.entries.back().gap, 1e-9);
}

}  // namespace
}  // namespace kcqe
