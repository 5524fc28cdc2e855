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

#include "kcqe/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace kcqe {

void LbfgsOptions::validate() const {
  if (memory < 1) throw std::invalid_argument("lbfgs: memory must be >= 1");
  if (!(gradient_tolerance > 0.0)) {
    throw std::invalid_argument("lbfgs: gradient_tolerance must be > 0");
  }
  if (max_iterations < 0) {
    throw std::invalid_argument("lbfgs: max_iterations must be >= 0");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw std::invalid_argument("lbfgs: shrink must lie in (0, 1)");
  }
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) {
    throw std::invalid_argument("lbfgs: armijo_c1 must lie in (0, 1)");
  }
  if (!(max_step_norm >= 0.0)) {
    throw std::invalid_argument("lbfgs: max_step_norm must be >= 0");
  }
  if (!(relative_decrease_tolerance >= 0.0)) {
    throw std::invalid_argument(
        "lbfgs: relative_decrease_tolerance must be >= 0");
  }
}

std::string_view to_string(LbfgsStatus status) {
  switch (status) {
    case LbfgsStatus::kConverged:
      return "converged";
    case LbfgsStatus::kMaxIterations:
      return "max_iterations";
    case LbfgsStatus::kLineSearchFailed:
      return "line_search_failed";
    case LbfgsStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

LbfgsStatus lbfgs_status_from_string(std::string_view name) {
  if (name == "converged") return LbfgsStatus::kConverged;
  if (name == "max_iterations") return LbfgsStatus::kMaxIterations;
  if (name == "line_search_failed") return LbfgsStatus::kLineSearchFailed;
  if (name == "stalled") return LbfgsStatus::kStalled;
  throw std::invalid_argument("unknown optimizer status: " + std::string(name));
}

namespace {

struct Correction {
  RealVector s;
  RealVector y;
  double rho;
};

// Two-loop recursion: returns -H g.
RealVector search_direction(const std::deque<Correction>& history,
                            const RealVector& grad) {
  RealVector q = grad;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  if (!history.empty()) {
    const auto& last = history.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return -q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const ValueAndGradient& objective,
                           const RealVector& x0, const LbfgsOptions& options) {
  options.validate();

  LbfgsResult result;
  RealVector x = x0;
  RealVector grad(x.size());
  double f = objective(x, grad);
  ++result.evaluations;
  if (!std::isfinite(f) || !grad.allFinite()) {
    throw NumericalError("lbfgs: objective not finite at the starting point");
  }
  const double f0 = f;
  result.history.push_back(f);

  std::deque<Correction> history;
  RealVector trial_grad(x.size());
  result.status = LbfgsStatus::kMaxIterations;

  auto inf_norm = [](const RealVector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  };

  for (;;) {
    if (inf_norm(grad) <= options.gradient_tolerance) {
      result.status = LbfgsStatus::kConverged;
      break;
    }
    if (result.iterations >= options.max_iterations) {
      result.status = LbfgsStatus::kMaxIterations;
      break;
    }

    RealVector direction = search_direction(history, grad);
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      // Curvature information went stale; restart from steepest descent.
      history.clear();
      direction = -grad;
      slope = grad.dot(direction);
    }

    double step = 1.0;
    if (history.empty()) step = std::min(1.0, 1.0 / direction.norm());
    if (options.max_step_norm > 0.0) {
      step = std::min(step, options.max_step_norm / direction.norm());
    }

    // Below round-off the sufficient-decrease test is meaningless; there a
    // step is taken on the approximate Wolfe conditions of the directional
    // derivative instead, which rules out vanishing steps.
    const double noise = options.relative_noise * std::abs(f);
    bool accepted = false;
    RealVector x_trial;
    double f_trial = 0.0;
    while (step >= options.min_step) {
      x_trial = x + step * direction;
      f_trial = objective(x_trial, trial_grad);
      ++result.evaluations;
      if (std::isfinite(f_trial) && trial_grad.allFinite()) {
        if (f_trial <= f + options.armijo_c1 * step * slope) {
          accepted = true;
          break;
        }
        const double trial_slope = trial_grad.dot(direction);
        if (f_trial <= f + noise && trial_slope >= 0.9 * slope &&
            trial_slope <= -0.8 * slope) {
          accepted = true;
          break;
        }
      }
      step *= options.shrink;
    }
    if (!accepted) {
      result.status = LbfgsStatus::kLineSearchFailed;
      break;
    }

    Correction c{x_trial - x, trial_grad - grad, 0.0};
    const double sy = c.s.dot(c.y);
    if (sy > 1e-16 * c.s.norm() * c.y.norm() && sy > 0.0) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (static_cast<int>(history.size()) > options.memory) {
        history.pop_front();
      }
    }

    const double decrease = f - f_trial;
    x = std::move(x_trial);
    f = f_trial;
    grad = trial_grad;
    ++result.iterations;
    result.history.push_back(f);
    if (decrease <= options.relative_decrease_tolerance *
                        std::max(std::abs(f), 1.0)) {
      result.status = LbfgsStatus::kStalled;
      break;
    }
  }

  // Round-off slack must never leave us above the starting value.
  if (f > f0) {
    x = x0;
    f = objective(x, grad);
    ++result.evaluations;
  }
  result.x = std::move(x);
  result.f = f;
  result.gradient_inf_norm = inf_norm(grad);
  return result;
}

LbfgsResult lbfgs_minimize(
    const ScalarObjective& objective,
    const std::function<RealVector(const RealVector&)>& gradient,
    const RealVector& x0, const LbfgsOptions& options) {
  return lbfgs_minimize(
      [&](const RealVector& x, RealVector& grad) {
        grad = gradient(x);
        return objective(x);
      },
      x0, options);
}

}  // namespace kcqe
