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

#include <functional>
#include <string_view>
#include <vector>

#include "kcqe/numerics.hpp"

namespace kcqe {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 500;
  double gradient_tolerance = 1e-9;  // on the infinity norm
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  double min_step = 1e-16;
  // Objective resolution relative to |f|. Steps whose decrease is below it
  // are judged by the approximate Wolfe conditions on the gradient.
  double relative_noise = 4.0 * 2.220446049250313e-16;
  // Stop once an accepted step lowers f by no more than this times
  // max(|f|, 1). Zero disables the test.
  double relative_decrease_tolerance = 1e-12;
  // Upper bound on the Euclidean length of a trial step; zero means none.
  double max_step_norm = 0.0;

  void validate() const;
};

enum class LbfgsStatus {
  kConverged,
  kMaxIterations,
  kLineSearchFailed,
  kStalled,  // relative decrease below tolerance; not a failure
};

std::string_view to_string(LbfgsStatus status);
LbfgsStatus lbfgs_status_from_string(std::string_view name);

struct LbfgsResult {
  RealVector x;
  double f = 0.0;
  double gradient_inf_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::kMaxIterations;
  std::vector<double> history;  // objective at every accepted iterate
};

/// Objective returning f(x) and writing the gradient into `grad`.
using ValueAndGradient = std::function<double(const RealVector& x,
                                              RealVector& grad)>;

/// Limited-memory BFGS with backtracking Armijo line search (plus
/// approximate-Wolfe acceptance at the round-off floor). Never throws on
/// line-search failure: the best iterate is returned with
/// LbfgsStatus::kLineSearchFailed. Deterministic.
LbfgsResult lbfgs_minimize(const ValueAndGradient& objective,
                           const RealVector& x0,
                           const LbfgsOptions& options = {});

/// Convenience overload with separate callables.
LbfgsResult lbfgs_minimize(
    const ScalarObjective& objective,
    const std::function<RealVector(const RealVector&)>& gradient,
    const RealVector& x0, const LbfgsOptions& options = {});

}  // namespace kcqe
