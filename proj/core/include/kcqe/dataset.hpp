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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kcqe/cqe.hpp"
#include "kcqe/hamiltonian.hpp"
#include "kcqe/lbfgs.hpp"

namespace kcqe {

inline constexpr int kDatasetFormatVersion = 1;

/// How k layers are packed into one flat vector: layer-major, within a layer
/// the active generators in order (a then b), each num_terms long.
struct AnsatzLayout {
  int k = 1;
  AnsatzMode mode = AnsatzMode::kHermitian;
  std::size_t num_terms = 0;

  std::size_t per_layer() const;
  std::size_t length() const { return per_layer() * static_cast<std::size_t>(k); }

  RealVector flatten(const std::vector<AnsatzLayer>& layers) const;
  /// Inactive generators come back as zero vectors.
  std::vector<AnsatzLayer> unflatten(const RealVector& flat) const;

  bool operator==(const AnsatzLayout&) const = default;
};

struct SampleRecord {
  std::uint64_t index = 0;  // draw index within the regime
  RealVector physical_params;
  RealVector flat_ansatz;  // NaN-filled when the solve threw
  double e_cqe = 0.0;
  double e_exact = 0.0;
  double variance_final = 0.0;
  std::vector<LbfgsStatus> optimizer_flags;  // one per iteration
  std::string failure;  // exception text of a failed solve, else empty

  bool flagged() const;
  bool operator==(const SampleRecord&) const;
};

struct DatasetManifest {
  int version = kDatasetFormatVersion;
  std::string family_json;  // HamiltonianFamily::metadata_json()
  ParameterRegime regime;
  AnsatzLayout layout;
  std::size_t count = 0;
  CqeOptions solver;  // options every record was solved with
  std::string config_json = "{}";  // effective run config, verbatim

  std::uint64_t seed() const { return regime.seed; }
  bool operator==(const DatasetManifest&) const;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<SampleRecord> records;
};

/// Solves one draw. NumericalError from the solver becomes a flagged record.
SampleRecord solve_sample(const HamiltonianFamily& family,
                          const ParameterRegime& regime, std::uint64_t index,
                          const AnsatzLayout& layout,
                          const CqeOptions& options = {});

/// Draws 0 .. count-1 solved on `workers` threads; rows are assembled by
/// index so the result does not depend on the worker count.
Dataset generate(const HamiltonianFamily& family,
                 const ParameterRegime& regime, int k, AnsatzMode mode,
                 std::size_t count, const CqeOptions& options = {},
                 int workers = 1, std::string config_json = "{}");

/// Manifest line then one JSON line per record.
std::string serialize(const Dataset& dataset);
Dataset parse_dataset(const std::string& text, bool filter_flagged = false,
                      const std::string& source = "<memory>");

void save(const Dataset& dataset, const std::filesystem::path& path);
/// Throws IoError naming the line on malformed rows or a version mismatch.
Dataset load(const std::filesystem::path& path, bool filter_flagged = false);

/// Seeded shuffle, first round(fraction * n) rows to train. Both halves are
/// returned in their original relative order.
std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> split(
    const std::vector<SampleRecord>& records, double fraction,
    std::uint64_t seed);

std::string regime_json(const ParameterRegime& regime);
ParameterRegime regime_from_json(const std::string& json);

}  // namespace kcqe
