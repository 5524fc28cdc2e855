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


#include <benchmark/benchmark.h>

#include "kcqe/cqe.hpp"
#include "kcqe/eval.hpp"
#include "kcqe/oracle.hpp"
#include "kcqe/surrogate.hpp"

namespace {

using namespace kcqe;

RealVector u_param(double u) {
  RealVector p(1);
  p << u;
  return p;
}

void BM_HermitianEig(benchmark::State& state) {
  const auto fam = build_hubbard_family(static_cast<int>(state.range(0)), 2);
  const ComplexMatrix h = assemble(fam, u_param(5.0));
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
  state.SetLabel("dim " + std::to_string(h.rows()));
}
BENCHMARK(BM_HermitianEig)->Arg(5)->Arg(8)->Arg(9);

void BM_LayerValueAndGradient(benchmark::State& state) {
  const auto fam = build_hubbard_family(9, 2);
  const RealVector p = u_param(5.0);
  const LayerObjective obj(fam, p, trial_state(fam, p), AnsatzMode::kHermitian);
  RealVector theta = RealVector::Constant(obj.num_parameters(), 0.01);
  RealVector grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.value_and_gradient(theta, grad));
  }
}
BENCHMARK(BM_LayerValueAndGradient);

void BM_SolveHubbardK2(benchmark::State& state) {
  const auto fam = build_hubbard_family(9, 2);
  const RealVector p = u_param(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_kcqe(fam, p, 2, AnsatzMode::kHermitian));
  }
}
BENCHMARK(BM_SolveHubbardK2)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SolvePauliK1(benchmark::State& state) {
  const auto fam = build_pauli_family(2);
  const auto regime = uniform_regime("r2", 16, {-3.8, -1.2}, 1);
  const RealVector p = sample_parameter(regime, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_kcqe(fam, p, 1, AnsatzMode::kUnitary));
  }
}
BENCHMARK(BM_SolvePauliK1)->Unit(benchmark::kMicrosecond);

void BM_MlpTrainStep(benchmark::State& state) {
  MlpConfig c;
  c.input_dim = 16;
  c.output_dim = 16;
  c.seed = 1;
  MlpParams params = init(c);
  const auto batch = state.range(0);
  const RealMatrix x = RealMatrix::Random(16, batch);
  const RealMatrix y = RealMatrix::Random(16, batch);
  RealVector grad;
  AdamState adam;
  TrainConfig tc;
  for (auto _ : state) {
    loss_and_gradient(params, x, y, grad);
    adam_step(params, grad, adam, tc);
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpTrainStep)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
