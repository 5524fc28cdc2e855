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
#include <filesystem>
#include <set>
#include <string>

#include "kcqe/dataset.hpp"
#include "kcqe/format.hpp"
#include "kcqe/oracle.hpp"

namespace kcqe {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kcqe_test_dataset_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Dataset small_pauli(std::size_t count, int workers = 1) {
  const auto f = build_pauli_family(2);
  return generate(f, uniform_regime("r1", 16, {-0.2, 0.2}, 11), 1,
                  AnsatzMode::kUnitary, count, {}, workers);
}

Dataset small_hubbard(std::size_t count, int workers = 1) {
  const auto f = build_hubbard_family(5, 2);
  return generate(f, uniform_regime("u", 1, {0.0, 20.0}, 5), 2,
                  AnsatzMode::kHermitian, count, {}, workers);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    out.push_back(text.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

TEST(Layout, FlattenRoundTripAndLengths) {
  const AnsatzLayout pauli{1, AnsatzMode::kUnitary, 16};
  EXPECT_EQ(pauli.length(), 16u);
  const AnsatzLayout full{2, AnsatzMode::kFull, 3};
  EXPECT_EQ(full.length(), 12u);
  const RealVector flat = RealVector::LinSpaced(12, 1.0, 12.0);
  const auto layers = full.unflatten(flat);
  ASSERT_EQ(layers.size(), 2u);
  EXPECT_EQ(layers[0].a(0), 1.0);
  EXPECT_EQ(layers[0].b(0), 4.0);
  EXPECT_EQ(layers[1].a(0), 7.0);
  EXPECT_EQ(full.flatten(layers), flat);
  const AnsatzLayout herm{2, AnsatzMode::kHermitian, 10};
  EXPECT_EQ(herm.length(), 20u);
  EXPECT_TRUE(herm.unflatten(RealVector::Ones(20))[1].a.isZero(0.0));
  EXPECT_THROW(herm.unflatten(RealVector::Ones(19)), std::invalid_argument);
}

TEST(Generate, ZeroCountGivesEmptyDataset) {
  const Dataset d = small_pauli(0);
  EXPECT_TRUE(d.records.empty());
  EXPECT_EQ(d.manifest.count, 0u);
  const Dataset back = parse_dataset(serialize(d));
  EXPECT_TRUE(back.records.empty());
}

TEST(Generate, RecordsCarryIndexAndSolverOutput) {
  const Dataset d = small_pauli(20);
  ASSERT_EQ(d.records.size(), 20u);
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    const SampleRecord& r = d.records[i];
    EXPECT_EQ(r.index, i);
    EXPECT_EQ(r.flat_ansatz.size(), 16);
    EXPECT_EQ(r.optimizer_flags.size(), 1u);
    EXPECT_FALSE(r.flagged());
    EXPECT_GE(r.e_cqe, r.e_exact - 1e-12);
    EXPECT_NEAR(r.e_cqe, r.e_exact, 1e-7);
  }
}

TEST(Generate, ByteIdenticalAcrossRunsAndWorkerCounts) {
  const std::string one = serialize(small_hubbard(12, 1));
  EXPECT_EQ(one, serialize(small_hubbard(12, 1)));
  EXPECT_EQ(one, serialize(small_hubbard(12, 3)));
}

TEST(Serialize, RoundTripsExactly) {
  const Dataset d = small_hubbard(6);
  const fs::path dir = scratch_dir("roundtrip");
  save(d, dir / "d.jsonl");
  const Dataset back = load(dir / "d.jsonl");
  EXPECT_EQ(back.manifest, d.manifest);
  ASSERT_EQ(back.records.size(), d.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    EXPECT_EQ(back.records[i], d.records[i]);
  }
  EXPECT_EQ(back.manifest.solver.ridge, d.manifest.solver.ridge);
  EXPECT_EQ(serialize(back), serialize(d));
}

TEST(Serialize, FlaggedRowsSurviveAndCanBeFiltered) {
  Dataset d = small_pauli(4);
  d.records[1].optimizer_flags[0] = LbfgsStatus::kLineSearchFailed;
  d.records[2].flat_ansatz.setConstant(std::nan(""));
  d.records[2].failure = "apply_layer: norm collapsed";
  const std::string text = serialize(d);
  const Dataset all = parse_dataset(text);
  ASSERT_EQ(all.records.size(), 4u);
  EXPECT_TRUE(all.records[1].flagged());
  EXPECT_TRUE(all.records[2].flagged());
  EXPECT_TRUE(std::isnan(all.records[2].flat_ansatz(0)));
  EXPECT_EQ(all.records[2], d.records[2]);
  const Dataset kept = parse_dataset(text, true);
  ASSERT_EQ(kept.records.size(), 2u);
  EXPECT_EQ(kept.records[0].index, 0u);
  EXPECT_EQ(kept.records[1].index, 3u);
}

TEST(Parse, MalformedRowNamesItsLine) {
  auto lines = lines_of(serialize(small_pauli(3)));
  lines[2] = "{\"index\": 1, \"physical_params\": [1,";
  try {
    parse_dataset(join(lines), false, "data.jsonl");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("data.jsonl:3:"), std::string::npos)
        << e.what();
  }
}

TEST(Parse, RejectsVersionMismatchAndCountMismatch) {
  auto lines = lines_of(serialize(small_pauli(2)));
  std::string bumped = lines[0];
  bumped.replace(bumped.find("\"version\":1"), 11, "\"version\":2");
  auto v2 = lines;
  v2[0] = bumped;
  EXPECT_THROW(parse_dataset(join(v2)), IoError);
  lines.pop_back();
  EXPECT_THROW(parse_dataset(join(lines)), IoError);
  EXPECT_THROW(load("/nonexistent/kcqe/data.jsonl"), IoError);
}

TEST(Split, SizesDisjointnessOrderAndDeterminism) {
  std::vector<SampleRecord> records(2000);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].index = i;
  const auto [train, val] = split(records, 0.9, 7);
  EXPECT_EQ(train.size(), 1800u);
  EXPECT_EQ(val.size(), 200u);
  std::set<std::uint64_t> seen;
  for (const auto* part : {&train, &val}) {
    for (std::size_t i = 0; i < part->size(); ++i) {
      seen.insert((*part)[i].index);
      if (i > 0) {
        EXPECT_LT((*part)[i - 1].index, (*part)[i].index);
      }
    }
  }
  EXPECT_EQ(seen.size(), 2000u);
  const auto again = split(records, 0.9, 7);
  EXPECT_EQ(again.second.front().index, val.front().index);
  const auto other = split(records, 0.9, 8);
  bool differs = false;
  for (std::size_t i = 0; i < val.size(); ++i) {
    differs |= other.second[i].index != val[i].index;
  }
  EXPECT_TRUE(differs);
  EXPECT_THROW(split(records, 1.5, 7), std::invalid_argument);
}

TEST(Replay, StoredParametersReproduceStoredEnergy) {
  const auto f = build_hubbard_family(5, 2);
  const Dataset d = small_hubbard(5);
  for (const SampleRecord& r : d.records) {
    StateVector s = trial_state(f, r.physical_params);
    for (const AnsatzLayer& layer : d.manifest.layout.unflatten(r.flat_ansatz)) {
      s = apply_layer(f, layer, s);
    }
    const double e = expectation(assemble(f, r.physical_params), s);
    EXPECT_NEAR(e, r.e_cqe, 1e-11);
    EXPECT_NEAR(exact_ground(f, r.physical_params).ground_energy(), r.e_exact,
                1e-12);
  }
}

TEST(Generate, HubbardNineSiteTwoIterationAccuracy) {
  const auto f = build_hubbard_family(9, 2);
  const Dataset d = generate(f, uniform_regime("u", 1, {0.0, 20.0}, 9), 2,
                             AnsatzMode::kHermitian, 100);
  double rel = 0.0;
  for (const SampleRecord& r : d.records) {
    rel += std::abs(r.e_cqe - r.e_exact) / std::abs(r.e_exact);
  }
  EXPECT_LE(rel / 100.0, 1e-5);
}

TEST(RegimeJson, RoundTrip) {
  const ParameterRegime r = uniform_regime("r2", 16, {-3.8, -1.2}, 99);
  const ParameterRegime back = regime_from_json(regime_json(r));
  EXPECT_EQ(back.name, r.name);
  EXPECT_EQ(back.seed, r.seed);
  ASSERT_EQ(back.bounds.size(), 16u);
  EXPECT_EQ(back.bounds[3].lower, -3.8);
}

}  // namespace
}  // namespace kcqe
