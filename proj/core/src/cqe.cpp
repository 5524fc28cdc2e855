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

#include "kcqe/cqe.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kcqe {

std::string_view to_string(AnsatzMode mode) {
  switch (mode) {
    case AnsatzMode::kFull: return "full";
    case AnsatzMode::kUnitary: return "unitary";
    case AnsatzMode::kHermitian: return "hermitian";
  }
  return "unknown";
}

AnsatzMode ansatz_mode_from_string(std::string_view name) {
  if (name == "full") return AnsatzMode::kFull;
  if (name == "unitary") return AnsatzMode::kUnitary;
  if (name == "hermitian") return AnsatzMode::kHermitian;
  throw std::invalid_argument("unknown ansatz mode '" + std::string(name) +
                              "' (expected full, unitary or hermitian)");
}

int active_generators(AnsatzMode mode) {
  return mode == AnsatzMode::kFull ? 2 : 1;
}

AnsatzLayer AnsatzLayer::zero(std::size_t num_terms) {
  const auto n = static_cast<Eigen::Index>(num_terms);
  return {RealVector::Zero(n), RealVector::Zero(n)};
}

bool CqeSolution::any_flagged() const {
  for (const auto& it : per_iteration) {
    if (it.status == LbfgsStatus::kLineSearchFailed) return true;
  }
  return false;
}

namespace {

constexpr double kAnnihilationNorm = 1e-14;
const Complex kI(0.0, 1.0);

bool uses_a(AnsatzMode mode) { return mode != AnsatzMode::kHermitian; }
bool uses_b(AnsatzMode mode) { return mode != AnsatzMode::kUnitary; }

ComplexMatrix generator(const HamiltonianFamily& family,
                        const RealVector& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != family.num_terms()) {
    throw std::invalid_argument("layer has " + std::to_string(coeffs.size()) +
                                " coefficients, family has " +
                                std::to_string(family.num_terms()) + " terms");
  }
  const Eigen::Index dim = family.dimension();
  ComplexMatrix g = ComplexMatrix::Zero(dim, dim);
  for (std::size_t l = 0; l < family.num_terms(); ++l) {
    if (coeffs(l) != 0.0) g += coeffs(l) * family.term(l);
  }
  return g;
}

// e^{B - lambda_max} v. The shift cancels on normalization; log of the true
// norm is lambda_max + log(norm of the result).
StateVector shifted_hermitian_action(const EigenDecomposition& eig,
                                     const StateVector& v) {
  const double top = eig.eigenvalues(eig.dim() - 1);
  StateVector c = eig.eigenvectors.adjoint() * v;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c(i) *= std::exp(eig.eigenvalues(i) - top);
  }
  return eig.eigenvectors * c;
}

ComplexMatrix shifted_kernel(const EigenDecomposition& eig) {
  EigenDecomposition shifted = eig;
  shifted.eigenvalues.array() -= eig.eigenvalues(eig.dim() - 1);
  return exp_derivative_kernel(shifted, 1.0);
}

// Q = V M^T V^H with M_ij = conj(gt_i) K_ij ut_j, so that
// <g| D[h] u> = tr(h Q) for the Frechet derivative D encoded by (V, K).
ComplexMatrix contraction(const EigenDecomposition& eig,
                          const ComplexMatrix& kernel, const StateVector& g,
                          const StateVector& u) {
  const StateVector gt = eig.eigenvectors.adjoint() * g;
  const StateVector ut = eig.eigenvectors.adjoint() * u;
  const ComplexMatrix m =
      gt.conjugate().asDiagonal() * kernel * ut.asDiagonal();
  return eig.eigenvectors * m.transpose() * eig.eigenvectors.adjoint();
}

Complex trace_product(const ComplexMatrix& h, const ComplexMatrix& q) {
  return h.cwiseProduct(q.transpose()).sum();
}

}  // namespace

StateVector trial_state(const HamiltonianFamily& family,
                        const RealVector& physical_params) {
  if (family.kind() == FamilyKind::kPauli) {
    StateVector v = StateVector::Zero(family.dimension());
    v(0) = 1.0;
    return v;
  }
  (void)family.coefficients(physical_params);  // validates the length
  RealVector free(1);
  free << 0.0;
  const EigenDecomposition eig = hermitian_eig(assemble(family, free));
  StateVector v = eig.eigenvectors.col(0);
  canonicalize_phase(v);
  return v;
}

StateVector apply_layer(const HamiltonianFamily& family,
                        const AnsatzLayer& layer, const StateVector& state) {
  if (state.size() != family.dimension()) {
    throw std::invalid_argument("apply_layer: state dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(family.num_terms());
  if (layer.a.size() != n || layer.b.size() != n) {
    throw std::invalid_argument("apply_layer: layer/term count mismatch");
  }
  StateVector u = state;
  if (!layer.a.isZero(0.0)) {
    u = exp_action(hermitian_eig(generator(family, layer.a)), kI, u);
  }
  if (layer.b.isZero(0.0)) return u / u.norm();

  const EigenDecomposition eig = hermitian_eig(generator(family, layer.b));
  StateVector w = shifted_hermitian_action(eig, u);
  const double norm = w.norm();
  const double log_norm = eig.eigenvalues(eig.dim() - 1) + std::log(norm);
  if (!(norm > 0.0) || log_norm < std::log(kAnnihilationNorm)) {
    throw NumericalError(
        "apply_layer: Hermitian factor annihilated the state (norm below "
        "1e-14)");
  }
  return w / norm;
}

double expectation(const ComplexMatrix& h, const StateVector& state) {
  return state.dot(h * state).real();
}

double variance(const HamiltonianFamily& family,
                const RealVector& physical_params, const StateVector& state) {
  const ComplexMatrix h = assemble(family, physical_params);
  const StateVector hv = h * state;
  const double mean = state.dot(hv).real();
  return std::max(0.0, hv.squaredNorm() - mean * mean);
}

RealVector cse_residual(const HamiltonianFamily& family,
                        const RealVector& physical_params,
                        const StateVector& state) {
  const ComplexMatrix h = assemble(family, physical_params);
  const StateVector hv = h * state;
  const double mean = state.dot(hv).real();
  RealVector r(static_cast<Eigen::Index>(family.num_terms()));
  for (std::size_t l = 0; l < family.num_terms(); ++l) {
    const StateVector term_v = family.term(l) * state;
    // <s|h_l H|s> = <h_l s | H s>
    r(l) = term_v.dot(hv).real() - mean * state.dot(term_v).real();
  }
  return r;
}

LayerObjective::LayerObjective(const HamiltonianFamily& family,
                               const RealVector& physical_params,
                               StateVector state, AnsatzMode mode)
    : family_(family),
      hamiltonian_(assemble(family, physical_params)),
      state_(std::move(state)),
      mode_(mode) {
  if (state_.size() != family.dimension()) {
    throw std::invalid_argument("LayerObjective: state dimension mismatch");
  }
}

Eigen::Index LayerObjective::num_parameters() const {
  return active_generators(mode_) *
         static_cast<Eigen::Index>(family_.num_terms());
}

AnsatzLayer LayerObjective::unpack(const RealVector& theta) const {
  if (theta.size() != num_parameters()) {
    throw std::invalid_argument("LayerObjective: wrong parameter count");
  }
  const auto n = static_cast<Eigen::Index>(family_.num_terms());
  AnsatzLayer layer = AnsatzLayer::zero(family_.num_terms());
  Eigen::Index offset = 0;
  if (uses_a(mode_)) {
    layer.a = theta.segment(offset, n);
    offset += n;
  }
  if (uses_b(mode_)) layer.b = theta.segment(offset, n);
  return layer;
}

RealVector LayerObjective::pack(const AnsatzLayer& layer) const {
  const auto n = static_cast<Eigen::Index>(family_.num_terms());
  RealVector theta(num_parameters());
  Eigen::Index offset = 0;
  if (uses_a(mode_)) {
    theta.segment(offset, n) = layer.a;
    offset += n;
  }
  if (uses_b(mode_)) theta.segment(offset, n) = layer.b;
  return theta;
}

double LayerObjective::value(const RealVector& theta) const {
  RealVector unused;
  return value_and_gradient(theta, unused);
}

double LayerObjective::value_and_gradient(const RealVector& theta,
                                          RealVector& grad) const {
  const AnsatzLayer layer = unpack(theta);
  const auto n = static_cast<Eigen::Index>(family_.num_terms());
  grad = RealVector::Zero(num_parameters());

  EigenDecomposition eig_a;
  StateVector u = state_;
  if (uses_a(mode_)) {
    eig_a = hermitian_eig(generator(family_, layer.a));
    u = exp_action(eig_a, kI, state_);
  }
  EigenDecomposition eig_b;
  StateVector w = u;
  double log_scale = 0.0;
  if (uses_b(mode_)) {
    eig_b = hermitian_eig(generator(family_, layer.b));
    w = shifted_hermitian_action(eig_b, u);
    log_scale = eig_b.eigenvalues(eig_b.dim() - 1);
  }
  const double norm2 = w.squaredNorm();
  if (!(norm2 > 0.0) ||
      log_scale + 0.5 * std::log(norm2) < std::log(kAnnihilationNorm)) {
    return std::numeric_limits<double>::infinity();
  }
  const StateVector hw = hamiltonian_ * w;
  const double energy = w.dot(hw).real() / norm2;

  // dE = 2 Re <g|dw>, g = (H - E) w / |w|^2.
  const StateVector g = (hw - energy * w) / norm2;

  Eigen::Index offset = 0;
  if (uses_a(mode_)) {
    // dw = e^{B} D_{iA}[i h] psi, and e^{B} is Hermitian.
    const StateVector g_back =
        uses_b(mode_) ? shifted_hermitian_action(eig_b, g) : g;
    const ComplexMatrix kernel = exp_derivative_kernel(eig_a, kI);
    const ComplexMatrix q = contraction(eig_a, kernel, g_back, state_);
    for (Eigen::Index l = 0; l < n; ++l) {
      grad(offset + l) = 2.0 * (kI * trace_product(family_.term(l), q)).real();
    }
    offset += n;
  }
  if (uses_b(mode_)) {
    const ComplexMatrix kernel = shifted_kernel(eig_b);
    const ComplexMatrix q = contraction(eig_b, kernel, g, u);
    for (Eigen::Index l = 0; l < n; ++l) {
      grad(offset + l) = 2.0 * trace_product(family_.term(l), q).real();
    }
  }
  return energy;
}

LayerResult minimize_layer(const HamiltonianFamily& family,
                           const RealVector& physical_params,
                           const StateVector& state, AnsatzMode mode,
                           const CqeOptions& options) {
  const LayerObjective objective(family, physical_params, state, mode);
  const RealVector theta0 = RealVector::Zero(objective.num_parameters());

  if (!(options.ridge >= 0.0)) {
    throw std::invalid_argument("minimize_layer: ridge must be >= 0");
  }
  const double ridge = options.ridge;
  const ScalarObjective energy = [&](const RealVector& theta) {
    return objective.value(theta);
  };

  LbfgsResult opt;
  if (options.gradient == GradientSupply::kAnalytic) {
    opt = lbfgs_minimize(
        [&](const RealVector& theta, RealVector& grad) {
          const double e = objective.value_and_gradient(theta, grad);
          grad += ridge * theta;
          return e + 0.5 * ridge * theta.squaredNorm();
        },
        theta0, options.lbfgs);
  } else {
    const ScalarObjective f = [&](const RealVector& theta) {
      return energy(theta) + 0.5 * ridge * theta.squaredNorm();
    };
    opt = lbfgs_minimize(
        f,
        [&](const RealVector& theta) {
          return fd_gradient(f, theta, options.fd_step);
        },
        theta0, options.lbfgs);
  }
  const double e = ridge == 0.0 ? opt.f : energy(opt.x);
  LayerResult out{objective.unpack(opt.x), e, std::move(opt)};
  return out;
}

CqeSolution solve_kcqe(const HamiltonianFamily& family,
                       const RealVector& physical_params, int k,
                       AnsatzMode mode, const CqeOptions& options) {
  if (k < 1) throw std::invalid_argument("solve_kcqe: k must be >= 1");
  const ComplexMatrix h = assemble(family, physical_params);

  CqeSolution sol;
  sol.mode = mode;
  sol.trial = trial_state(family, physical_params);
  sol.trial_energy = expectation(h, sol.trial);

  StateVector state = sol.trial;
  for (int n = 0; n < k; ++n) {
    LayerResult step =
        minimize_layer(family, physical_params, state, mode, options);
    state = apply_layer(family, step.layer, state);
    IterationRecord rec;
    rec.energy = expectation(h, state);
    rec.variance = variance(family, physical_params, state);
    rec.status = step.optimizer.status;
    rec.optimizer_iterations = step.optimizer.iterations;
    rec.gradient_inf_norm = step.optimizer.gradient_inf_norm;
    sol.per_iteration.push_back(rec);
    sol.layers.push_back(std::move(step.layer));
  }
  canonicalize_phase(state);
  sol.final_state = std::move(state);
  return sol;
}

}  // namespace kcqe
