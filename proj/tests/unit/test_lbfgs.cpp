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

#include "kcqe/lbfgs.hpp"

namespace kcqe {
namespace {

double rosenbrock(const RealVector& x, RealVector& g) {
  double f = 0.0;
  g = RealVector::Zero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i);
    const double b = 1.0 - x(i);
    f += 100.0 * a * a + b * b;
    g(i) += -400.0 * a * x(i) - 2.0 * b;
    g(i + 1) += 200.0 * a;
  }
  return f;
}

TEST(Lbfgs, MinimizesRosenbrock) {
  RealVector x0(4);
  x0 << -1.2, 1.0, -1.2, 1.0;
  LbfgsOptions options;
  options.relative_decrease_tolerance = 0.0;
  const LbfgsResult r = lbfgs_minimize(rosenbrock, x0, options);
  EXPECT_EQ(r.status, LbfgsStatus::kConverged);
  EXPECT_LT((r.x - RealVector::Ones(4)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(r.gradient_inf_norm, 1e-9);
}

TEST(Lbfgs, StallRuleStopsNearTheMinimum) {
  // f -> 0, so the test is on the absolute decrease 1e-12.
  RealVector x0(4);
  x0 << -1.2, 1.0, -1.2, 1.0;
  const LbfgsResult r = lbfgs_minimize(rosenbrock, x0);
  EXPECT_TRUE(r.status == LbfgsStatus::kStalled ||
              r.status == LbfgsStatus::kConverged);
  EXPECT_LT(r.f, 1e-10);
  EXPECT_LT((r.x - RealVector::Ones(4)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Lbfgs, StepLengthCap) {
  const ValueAndGradient bowl = [](const RealVector& x, RealVector& g) {
    g = x;
    return 0.5 * x.squaredNorm();
  };
  RealVector x0(2);
  x0 << 100.0, 0.0;
  LbfgsOptions capped;
  capped.max_step_norm = 1.0;
  capped.max_iterations = 10;
  const LbfgsResult r = lbfgs_minimize(bowl, x0, capped);
  EXPECT_GE(r.x(0), 90.0 - 1e-12);
  EXPECT_LT(r.x(0), 100.0);
  LbfgsOptions free_steps;
  free_steps.max_iterations = 10;
  EXPECT_LT(lbfgs_minimize(bowl, x0, free_steps).x.norm(), 1e-6);
  capped.max_step_norm = -1.0;
  EXPECT_THROW(capped.validate(), std::invalid_argument);
}

TEST(Lbfgs, ObjectiveSequenceNonIncreasing) {
  RealVector x0(2);
  x0 << -1.2, 1.0;
  const LbfgsResult r = lbfgs_minimize(rosenbrock, x0);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    EXPECT_LE(r.history[i], r.history[i - 1]);
  }
  RealVector g;
  EXPECT_LE(r.f, rosenbrock(x0, g));
}

TEST(Lbfgs, Deterministic) {
  RealVector x0(3);
  x0 << 0.3, -0.4, 2.0;
  const LbfgsResult a = lbfgs_minimize(rosenbrock, x0);
  const LbfgsResult b = lbfgs_minimize(rosenbrock, x0);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Lbfgs, MaxIterationsReported) {
  RealVector x0(2);
  x0 << -1.2, 1.0;
  LbfgsOptions o;
  o.max_iterations = 3;
  o.relative_decrease_tolerance = 0.0;
  const LbfgsResult r = lbfgs_minimize(rosenbrock, x0, o);
  EXPECT_EQ(r.status, LbfgsStatus::kMaxIterations);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Lbfgs, WrongGradientFailsLineSearchWithoutThrowing) {
  // Gradient sign flipped: every search direction points uphill.
  const ValueAndGradient bad = [](const RealVector& x, RealVector& g) {
    g = -2.0 * x;
    return x.squaredNorm();
  };
  RealVector x0 = RealVector::Constant(2, 1.0);
  LbfgsResult r;
  ASSERT_NO_THROW(r = lbfgs_minimize(bad, x0));
  EXPECT_EQ(r.status, LbfgsStatus::kLineSearchFailed);
  EXPECT_LE(r.f, 2.0);
}

TEST(Lbfgs, StartingAtMinimumConvergesImmediately) {
  const ValueAndGradient f = [](const RealVector& x, RealVector& g) {
    g = 2.0 * x;
    return x.squaredNorm();
  };
  const LbfgsResult r = lbfgs_minimize(f, RealVector::Zero(3));
  EXPECT_EQ(r.status, LbfgsStatus::kConverged);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Lbfgs, SeparateCallableOverload) {
  const ScalarObjective f = [](const RealVector& x) {
    return (x.array() - 2.0).square().sum();
  };
  const auto g = [](const RealVector& x) -> RealVector {
    return 2.0 * (x.array() - 2.0).matrix();
  };
  const LbfgsResult r = lbfgs_minimize(f, g, RealVector::Zero(5));
  EXPECT_LT((r.x.array() - 2.0).abs().maxCoeff(), 1e-10);
}

TEST(Lbfgs, NonFiniteStartThrows) {
  const ValueAndGradient f = [](const RealVector&, RealVector& g) {
    g = RealVector::Zero(1);
    return std::nan("");
  };
  EXPECT_THROW(lbfgs_minimize(f, RealVector::Zero(1)), NumericalError);
}

TEST(LbfgsOptions, ValidationRejectsBadValues) {
  LbfgsOptions o;
  o.memory = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.gradient_tolerance = 0.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.shrink = 1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(LbfgsStatus, StringRoundTrip) {
  for (auto s : {LbfgsStatus::kConverged, LbfgsStatus::kMaxIterations,
                 LbfgsStatus::kLineSearchFailed, LbfgsStatus::kStalled}) {
    EXPECT_EQ(lbfgs_status_from_string(to_string(s)), s);
  }
  EXPECT_THROW(lbfgs_status_from_string("nope"), std::invalid_argument);
}

}  // namespace
}  // namespace kcqe
