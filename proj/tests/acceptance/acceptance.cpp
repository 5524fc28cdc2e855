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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "kcqe/cqe.hpp"
#include "kcqe/dataset.hpp"
#include "kcqe/eval.hpp"
#include "kcqe/oracle.hpp"
#include "kcqe/rng.hpp"
#include "kcqe/surrogate.hpp"

namespace kcqe {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void report(int n, const std::string& title, const Verdict& v,
            Clock::time_point start) {
  std::printf("[%s] criterion %d: %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL",
              n, title.c_str(), v.detail.c_str(), seconds_since(start));
  std::fflush(stdout);
}

RealVector scalar(double u) {
  RealVector p(1);
  p << u;
  return p;
}

// Two-iteration Hermitian solve over the 41-point U grid on nine sites.
Verdict lattice_two_iterations() {
  const auto family = build_hubbard_family(9, 2);
  const auto rows =
      sweep(family, uniform_grid(0.0, 20.0, 0.5), 2, AnsatzMode::kHermitian);
  double it1 = 0.0;
  double it2 = 0.0;
  for (const auto& r : rows) {
    it1 += r.percent_error(0);
    it2 += r.percent_error(1);
  }
  it1 /= static_cast<double>(rows.size());
  it2 /= static_cast<double>(rows.size());
  Verdict v;
  v.check(rows.size() == 41, std::to_string(rows.size()) + " grid points");
  v.check(it1 <= 0.05, fmt("iteration 1 mean %.3e %% <= 0.05 %%", it1));
  v.check(it2 <= 0.005, fmt("iteration 2 mean %.3e %% <= 0.005 %%", it2));
  return v;
}

// One unitary layer solves every sampled two-qubit Hamiltonian.
Verdict qubit_one_shot() {
  const auto family = build_pauli_family(2);
  Verdict v;
  int index = 0;
  for (const ParameterRegime& regime :
       {uniform_regime("r1", 16, {-0.2, 0.2}, 101),
        uniform_regime("r2", 16, {-3.8, -1.2}, 102)}) {
    double worst_infidelity = 0.0;
    double worst_energy = 0.0;
    for (const RealVector& p : sample_parameters(regime, 200)) {
      const CqeSolution s = solve_kcqe(family, p, 1, AnsatzMode::kUnitary);
      const SpectrumResult exact = exact_ground(family, p);
      worst_infidelity = std::max(
          worst_infidelity, 1.0 - fidelity(s.final_state, exact.ground_state));
      worst_energy =
          std::max(worst_energy, std::abs(s.energy() - exact.ground_energy()));
    }
    ++index;
    const std::string tag = "regime " + std::to_string(index);
    v.check(worst_infidelity <= 1e-8,
            tag + fmt(" worst 1-F %.2e <= 1e-8", worst_infidelity));
    v.check(worst_energy <= 1e-7,
            tag + fmt(" worst |dE| %.2e <= 1e-7", worst_energy));
  }
  return v;
}

TrainConfig default_train(std::uint64_t seed) {
  TrainConfig tc;
  tc.seed = seed;
  tc.split_seed = seed + 1;
  return tc;
}

MlpConfig default_mlp(int in, int out, std::uint64_t seed) {
  MlpConfig mc;
  mc.input_dim = in;
  mc.output_dim = out;
  mc.seed = seed;
  return mc;
}

void progress(const char* tag, int epoch, const TrainReport& r) {
  if (epoch % 100 == 0 || epoch == 1) {
    std::printf("  %s epoch %d train %.3e validation %.3e param_mse %.3e\n",
                tag, epoch, r.train_loss.back(), r.validation_loss.back(),
                r.validation_param_mse.back());
    std::fflush(stdout);
  }
}

// Desk-scale surrogate for both two-qubit regimes.
Verdict qubit_surrogate() {
  const auto family = build_pauli_family(2);
  Verdict v;
  struct Case {
    ParameterRegime regime;
    double energy_bound;
  };
  const Case cases[] = {
      {uniform_regime("r1", 16, {-0.2, 0.2}, 201), 5e-3},
      {uniform_regime("r2", 16, {-3.8, -1.2}, 202), 1e-2},
  };
  int index = 0;
  for (const Case& c : cases) {
    ++index;
    const std::string tag = "regime " + std::to_string(index);
    const Dataset ds =
        generate(family, c.regime, 1, AnsatzMode::kUnitary, 20000);
    const TrainResult r =
        train(ds, default_mlp(16, 16, 300 + index), default_train(400 + index),
              {}, [&](int e, const TrainReport& rep) {
                progress(tag.c_str(), e, rep);
              });
    const auto& mse = r.report.validation_param_mse;
    const double drop = mse.front() / mse[r.report.best_epoch - 1];
    const EvalMetrics m = evaluate(r.model, family, r.validation_records);
    v.check(drop >= 10.0, tag + fmt(" param-MSE drop %.1fx >= 10x", drop));
    v.check(m.energy_mae <= c.energy_bound,
            tag + fmt(" energy MAE %.3e", m.energy_mae) +
                fmt(" <= %.0e", c.energy_bound));
  }
  return v;
}

// Lattice surrogate on five and eight sites.
Verdict lattice_surrogate() {
  Verdict v;
  for (int sites : {5, 8}) {
    const auto family = build_hubbard_family(sites, 2);
    const std::string tag = "L=" + std::to_string(sites);
    const Dataset ds =
        generate(family, uniform_regime("u", 1, {0.0, 20.0}, 500 + sites), 2,
                 AnsatzMode::kHermitian, 2000);
    const TrainResult r = train(
        ds,
        default_mlp(1, static_cast<int>(ds.manifest.layout.length()),
                    600 + sites),
        default_train(700 + sites), {}, [&](int e, const TrainReport& rep) {
          progress(tag.c_str(), e, rep);
        });
    const EvalMetrics m = evaluate(r.model, family, r.validation_records);
    v.check(ds.manifest.layout.length() == static_cast<std::size_t>(4 * sites),
            tag + " outputs " + std::to_string(ds.manifest.layout.length()));
    v.check(m.energy_relative_mean <= 1e-3,
            tag + fmt(" relative energy error %.3e <= 1e-3",
                      m.energy_relative_mean));
    v.check(m.observable_mae <= 1e-2,
            tag + fmt(" bond observable MAE %.3e <= 1e-2", m.observable_mae));
  }
  return v;
}

StateVector random_state(Eigen::Index dim, StreamRng& rng) {
  StateVector s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    s(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return s.normalized();
}

RealVector random_vector(Eigen::Index n, double scale, StreamRng& rng) {
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(-scale, scale);
  return v;
}

// Always-on property suites.
Verdict properties() {
  Verdict v;
  const auto pauli = build_pauli_family(2);
  const auto lattice = build_hubbard_family(5, 2);
  StreamRng rng(800, 0);

  double norm_error = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const HamiltonianFamily& f = i % 2 ? lattice : pauli;
    const auto n = static_cast<Eigen::Index>(f.num_terms());
    const StateVector s = random_state(f.dimension(), rng);
    const AnsatzLayer unitary{random_vector(n, 2.0, rng), RealVector::Zero(n)};
    ComplexMatrix gen = ComplexMatrix::Zero(f.dimension(), f.dimension());
    for (Eigen::Index l = 0; l < n; ++l) gen += unitary.a(l) * f.term(l);
    const StateVector raw = exp_hermitian_action(gen, Complex(0.0, 1.0), s);
    const AnsatzLayer full{random_vector(n, 2.0, rng),
                           random_vector(n, 2.0, rng)};
    norm_error = std::max({norm_error, std::abs(raw.norm() - 1.0),
                           std::abs(apply_layer(f, full, s).norm() - 1.0)});
  }
  v.check(norm_error <= 1e-10, fmt("norm error %.1e <= 1e-10", norm_error));

  double identity_error = 0.0;
  for (int i = 0; i < 100; ++i) {
    const HamiltonianFamily& f = i % 2 ? lattice : pauli;
    const RealVector p = i % 2 ? scalar(rng.uniform(0.0, 20.0))
                               : random_vector(16, 4.0, rng);
    const StateVector s = random_state(f.dimension(), rng);
    const double var = variance(f, p, s);
    identity_error =
        std::max(identity_error,
                 std::abs(f.coefficients(p).dot(cse_residual(f, p, s)) - var));
  }
  v.check(identity_error <= 1e-10,
          fmt("residual identity error %.1e <= 1e-10", identity_error));

  double residual = 0.0;
  double ground_variance = 0.0;
  for (int i = 0; i < 20; ++i) {
    const HamiltonianFamily& f = i % 2 ? lattice : pauli;
    const RealVector p = i % 2 ? scalar(rng.uniform(0.0, 20.0))
                               : random_vector(16, 4.0, rng);
    const StateVector g = exact_ground(f, p).ground_state;
    residual = std::max(residual, cse_residual(f, p, g).norm());
    ground_variance = std::max(ground_variance, variance(f, p, g));
  }
  v.check(residual <= 1e-9, fmt("ground residual %.1e <= 1e-9", residual));
  v.check(ground_variance <= 1e-10,
          fmt("ground variance %.1e <= 1e-10", ground_variance));

  double gradient_error = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MlpConfig c = default_mlp(2, 2, seed);
    c.hidden_width = 8;
    c.hidden_layers = 1;
    c.activation = seed % 2 ? Activation::kTanh : Activation::kRelu;
    const MlpParams params = init(c);
    RealMatrix x(2, 4);
    RealMatrix y(2, 4);
    for (Eigen::Index j = 0; j < 4; ++j) {
      x.col(j) = random_vector(2, 1.0, rng);
      y.col(j) = random_vector(2, 1.0, rng);
    }
    RealVector g;
    loss_and_gradient(params, x, y, g);
    const RealVector fd = fd_gradient(
        [&](const RealVector& theta) {
          MlpParams q = params;
          q.data() = theta;
          return loss(q, x, y);
        },
        params.data(), 1e-6);
    gradient_error = std::max(gradient_error, (g - fd).norm() / fd.norm());
  }
  v.check(gradient_error <= 1e-5,
          fmt("network gradient relative error %.1e <= 1e-5", gradient_error));
  return v;
}

}  // namespace
}  // namespace kcqe

int main(int argc, char** argv) {
  using namespace kcqe;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  const auto wanted = [&](int n) {
    return selected.empty() || selected.count(n) > 0;
  };

  struct Criterion {
    int number;
    const char* title;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "lattice two-iteration accuracy", lattice_two_iterations},
      {2, "two-qubit one-shot exactness", qubit_one_shot},
      {3, "two-qubit surrogate at desk scale", qubit_surrogate},
      {4, "lattice surrogate", lattice_surrogate},
      {5, "property suites", properties},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    if (!wanted(c.number)) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.check(false, std::string("threw: ") + e.what());
    }
    report(c.number, c.title, v, start);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
