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


#include "kcqe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "kcqe/format.hpp"
#include "kcqe/oracle.hpp"
#include "kcqe/rng.hpp"
#include "parallel.hpp"

namespace kcqe {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool uses_a(AnsatzMode mode) { return mode != AnsatzMode::kHermitian; }
bool uses_b(AnsatzMode mode) { return mode != AnsatzMode::kUnitary; }

// Bitwise equality that treats NaN == NaN (failed rows carry NaN).
bool same(double x, double y) {
  return x == y || (std::isnan(x) && std::isnan(y));
}

bool same(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!same(x(i), y(i))) return false;
  }
  return true;
}

void append_vector(std::string& out, const RealVector& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += json_double(v(i));
  }
  out += ']';
}

RealVector vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_null()) {
      v(static_cast<Eigen::Index>(i)) = kNaN;
    } else if (e.is_number()) {
      v(static_cast<Eigen::Index>(i)) = e.get<double>();
    } else {
      throw std::invalid_argument("array entry " + std::to_string(i) +
                                  " is not a number");
    }
  }
  return v;
}

double double_from_json(const json& j) {
  if (j.is_null()) return kNaN;
  if (!j.is_number()) throw std::invalid_argument("expected a number");
  return j.get<double>();
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("missing key '") + key + "'");
  }
  return *it;
}

json regime_to_json_value(const ParameterRegime& regime) {
  json j;
  j["name"] = regime.name;
  j["seed"] = regime.seed;
  json bounds = json::array();
  for (const auto& b : regime.bounds) bounds.push_back({b.lower, b.upper});
  j["bounds"] = bounds;
  return j;
}

ParameterRegime regime_from_json_value(const json& j) {
  ParameterRegime r;
  r.name = field(j, "name").get<std::string>();
  r.seed = field(j, "seed").get<std::uint64_t>();
  for (const auto& b : field(j, "bounds")) {
    if (!b.is_array() || b.size() != 2) {
      throw std::invalid_argument("regime bounds must be [lower, upper] pairs");
    }
    r.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  r.validate();
  return r;
}

json solver_to_json(const CqeOptions& c) {
  const LbfgsOptions& o = c.lbfgs;
  json j;
  j["memory"] = o.memory;
  j["max_iterations"] = o.max_iterations;
  j["gradient_tolerance"] = o.gradient_tolerance;
  j["armijo_c1"] = o.armijo_c1;
  j["shrink"] = o.shrink;
  j["min_step"] = o.min_step;
  j["relative_decrease_tolerance"] = o.relative_decrease_tolerance;
  j["max_step_norm"] = o.max_step_norm;
  j["gradient"] =
      c.gradient == GradientSupply::kAnalytic ? "analytic" : "finite_difference";
  j["fd_step"] = c.fd_step;
  j["ridge"] = c.ridge;
  return j;
}

CqeOptions solver_from_json(const json& j) {
  CqeOptions c;
  LbfgsOptions& o = c.lbfgs;
  o.memory = field(j, "memory").get<int>();
  o.max_iterations = field(j, "max_iterations").get<int>();
  o.gradient_tolerance = field(j, "gradient_tolerance").get<double>();
  o.armijo_c1 = field(j, "armijo_c1").get<double>();
  o.shrink = field(j, "shrink").get<double>();
  o.min_step = field(j, "min_step").get<double>();
  o.relative_decrease_tolerance =
      field(j, "relative_decrease_tolerance").get<double>();
  o.max_step_norm = field(j, "max_step_norm").get<double>();
  o.validate();
  const std::string gradient = field(j, "gradient").get<std::string>();
  if (gradient == "analytic") {
    c.gradient = GradientSupply::kAnalytic;
  } else if (gradient == "finite_difference") {
    c.gradient = GradientSupply::kFiniteDifference;
  } else {
    throw std::invalid_argument("unknown gradient supply: " + gradient);
  }
  c.fd_step = field(j, "fd_step").get<double>();
  c.ridge = field(j, "ridge").get<double>();
  return c;
}

std::string manifest_line(const DatasetManifest& m) {
  json j;
  j["format"] = "kcqe-dataset";
  j["version"] = m.version;
  j["family"] = json::parse(m.family_json);
  j["regime"] = regime_to_json_value(m.regime);
  j["k"] = m.layout.k;
  j["mode"] = std::string(to_string(m.layout.mode));
  j["count"] = m.count;
  j["seed"] = m.regime.seed;
  json layout;
  layout["k"] = m.layout.k;
  layout["num_terms"] = m.layout.num_terms;
  json blocks = json::array();
  if (uses_a(m.layout.mode)) blocks.push_back("a");
  if (uses_b(m.layout.mode)) blocks.push_back("b");
  layout["per_layer_blocks"] = blocks;
  layout["length"] = m.layout.length();
  j["layout"] = layout;
  j["solver"] = solver_to_json(m.solver);
  j["config"] = json::parse(m.config_json);
  return j.dump();
}

DatasetManifest manifest_from_line(const std::string& line) {
  const json j = json::parse(line);
  if (field(j, "format").get<std::string>() != "kcqe-dataset") {
    throw std::invalid_argument("not a kcqe dataset");
  }
  DatasetManifest m;
  m.version = field(j, "version").get<int>();
  if (m.version != kDatasetFormatVersion) {
    throw std::invalid_argument("dataset format version " +
                                std::to_string(m.version) + ", expected " +
                                std::to_string(kDatasetFormatVersion));
  }
  m.family_json = field(j, "family").dump();
  m.regime = regime_from_json_value(field(j, "regime"));
  m.layout.k = field(j, "k").get<int>();
  m.layout.mode = ansatz_mode_from_string(field(j, "mode").get<std::string>());
  const json& layout = field(j, "layout");
  m.layout.num_terms = field(layout, "num_terms").get<std::size_t>();
  if (field(layout, "length").get<std::size_t>() != m.layout.length()) {
    throw std::invalid_argument("layout length disagrees with k, mode, terms");
  }
  m.count = field(j, "count").get<std::size_t>();
  m.solver = solver_from_json(field(j, "solver"));
  m.config_json = field(j, "config").dump();
  return m;
}

std::string record_line(const SampleRecord& r) {
  std::string out = "{\"index\":" + std::to_string(r.index);
  out += ",\"physical_params\":";
  append_vector(out, r.physical_params);
  out += ",\"flat_ansatz\":";
  append_vector(out, r.flat_ansatz);
  out += ",\"e_cqe\":" + json_double(r.e_cqe);
  out += ",\"e_exact\":" + json_double(r.e_exact);
  out += ",\"variance_final\":" + json_double(r.variance_final);
  out += ",\"optimizer_flags\":[";
  for (std::size_t i = 0; i < r.optimizer_flags.size(); ++i) {
    if (i) out += ',';
    out += '"';
    out += to_string(r.optimizer_flags[i]);
    out += '"';
  }
  out += "],\"failure\":";
  out += r.failure.empty() ? std::string("null") : json(r.failure).dump();
  out += '}';
  return out;
}

SampleRecord record_from_line(const std::string& line) {
  const json j = json::parse(line);
  SampleRecord r;
  r.index = field(j, "index").get<std::uint64_t>();
  r.physical_params = vector_from_json(field(j, "physical_params"));
  r.flat_ansatz = vector_from_json(field(j, "flat_ansatz"));
  r.e_cqe = double_from_json(field(j, "e_cqe"));
  r.e_exact = double_from_json(field(j, "e_exact"));
  r.variance_final = double_from_json(field(j, "variance_final"));
  for (const auto& s : field(j, "optimizer_flags")) {
    r.optimizer_flags.push_back(lbfgs_status_from_string(s.get<std::string>()));
  }
  const json& failure = field(j, "failure");
  if (!failure.is_null()) r.failure = failure.get<std::string>();
  return r;
}

}  // namespace

std::size_t AnsatzLayout::per_layer() const {
  return static_cast<std::size_t>(active_generators(mode)) * num_terms;
}

RealVector AnsatzLayout::flatten(const std::vector<AnsatzLayer>& layers) const {
  if (layers.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("flatten: expected " + std::to_string(k) +
                                " layers, got " +
                                std::to_string(layers.size()));
  }
  const auto n = static_cast<Eigen::Index>(num_terms);
  RealVector flat(static_cast<Eigen::Index>(length()));
  Eigen::Index offset = 0;
  for (const auto& layer : layers) {
    if (layer.a.size() != n || layer.b.size() != n) {
      throw std::invalid_argument("flatten: layer has wrong term count");
    }
    if (uses_a(mode)) {
      flat.segment(offset, n) = layer.a;
      offset += n;
    }
    if (uses_b(mode)) {
      flat.segment(offset, n) = layer.b;
      offset += n;
    }
  }
  return flat;
}

std::vector<AnsatzLayer> AnsatzLayout::unflatten(const RealVector& flat) const {
  if (flat.size() != static_cast<Eigen::Index>(length())) {
    throw std::invalid_argument("unflatten: expected length " +
                                std::to_string(length()) + ", got " +
                                std::to_string(flat.size()));
  }
  const auto n = static_cast<Eigen::Index>(num_terms);
  std::vector<AnsatzLayer> layers;
  Eigen::Index offset = 0;
  for (int i = 0; i < k; ++i) {
    AnsatzLayer layer = AnsatzLayer::zero(num_terms);
    if (uses_a(mode)) {
      layer.a = flat.segment(offset, n);
      offset += n;
    }
    if (uses_b(mode)) {
      layer.b = flat.segment(offset, n);
      offset += n;
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

bool SampleRecord::flagged() const {
  if (!failure.empty()) return true;
  return std::any_of(optimizer_flags.begin(), optimizer_flags.end(),
                     [](LbfgsStatus s) {
                       return s == LbfgsStatus::kLineSearchFailed;
                     });
}

bool SampleRecord::operator==(const SampleRecord& o) const {
  return index == o.index && same(physical_params, o.physical_params) &&
         same(flat_ansatz, o.flat_ansatz) && same(e_cqe, o.e_cqe) &&
         same(e_exact, o.e_exact) && same(variance_final, o.variance_final) &&
         optimizer_flags == o.optimizer_flags && failure == o.failure;
}

bool DatasetManifest::operator==(const DatasetManifest& o) const {
  return manifest_line(*this) == manifest_line(o);
}

std::string regime_json(const ParameterRegime& regime) {
  return regime_to_json_value(regime).dump();
}

ParameterRegime regime_from_json(const std::string& text) {
  return regime_from_json_value(json::parse(text));
}

SampleRecord solve_sample(const HamiltonianFamily& family,
                          const ParameterRegime& regime, std::uint64_t index,
                          const AnsatzLayout& layout,
                          const CqeOptions& options) {
  SampleRecord r;
  r.index = index;
  r.physical_params = sample_parameter(regime, index);
  try {
    const SpectrumResult ref = exact_ground(family, r.physical_params);
    r.e_exact = ref.ground_energy();
    const CqeSolution sol =
        solve_kcqe(family, r.physical_params, layout.k, layout.mode, options);
    r.flat_ansatz = layout.flatten(sol.layers);
    r.e_cqe = sol.energy();
    r.variance_final = sol.per_iteration.back().variance;
    for (const auto& it : sol.per_iteration) {
      r.optimizer_flags.push_back(it.status);
    }
  } catch (const NumericalError& e) {
    r.flat_ansatz = RealVector::Constant(
        static_cast<Eigen::Index>(layout.length()), kNaN);
    r.e_cqe = kNaN;
    r.variance_final = kNaN;
    r.optimizer_flags.clear();
    r.failure = e.what();
    if (r.failure.empty()) r.failure = "numerical failure";
  }
  return r;
}

Dataset generate(const HamiltonianFamily& family,
                 const ParameterRegime& regime, int k, AnsatzMode mode,
                 std::size_t count, const CqeOptions& options, int workers,
                 std::string config_json) {
  regime.validate();
  if (regime.bounds.size() !=
      static_cast<std::size_t>(family.physical_param_dim())) {
    throw std::invalid_argument(
        "generate: regime has " + std::to_string(regime.bounds.size()) +
        " bounds, family expects " +
        std::to_string(family.physical_param_dim()));
  }
  if (k < 1) throw std::invalid_argument("generate: k must be >= 1");
  if (workers < 1) throw std::invalid_argument("generate: workers must be >= 1");
  options.lbfgs.validate();

  Dataset ds;
  ds.manifest.family_json = family.metadata_json();
  ds.manifest.regime = regime;
  ds.manifest.layout = {k, mode, family.num_terms()};
  ds.manifest.count = count;
  ds.manifest.solver = options;
  // Normalized so the manifest compares equal after a round trip.
  ds.manifest.config_json = json::parse(config_json).dump();
  ds.records.resize(count);

  detail::parallel_for(count, workers, [&](std::size_t i) {
    ds.records[i] = solve_sample(family, regime, i, ds.manifest.layout, options);
  });
  return ds;
}

std::string serialize(const Dataset& dataset) {
  std::string out = manifest_line(dataset.manifest);
  out += '\n';
  for (const auto& r : dataset.records) {
    out += record_line(r);
    out += '\n';
  }
  return out;
}

Dataset parse_dataset(const std::string& text, bool filter_flagged,
                      const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> IoError {
    return IoError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  Dataset ds;
  if (!std::getline(in, line)) {
    line_no = 1;
    throw fail("empty file, expected a manifest line");
  }
  line_no = 1;
  try {
    ds.manifest = manifest_from_line(line);
  } catch (const std::exception& e) {
    throw fail(std::string("bad manifest: ") + e.what());
  }
  const std::size_t n_params = [&] {
    try {
      return static_cast<std::size_t>(
          family_from_metadata(ds.manifest.family_json).physical_param_dim());
    } catch (const std::exception& e) {
      throw fail(std::string("bad family metadata: ") + e.what());
    }
  }();

  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw fail("empty line");
    SampleRecord r;
    try {
      r = record_from_line(line);
    } catch (const std::exception& e) {
      throw fail(std::string("malformed record: ") + e.what());
    }
    if (static_cast<std::size_t>(r.physical_params.size()) != n_params) {
      throw fail("physical_params has length " +
                 std::to_string(r.physical_params.size()) + ", expected " +
                 std::to_string(n_params));
    }
    if (static_cast<std::size_t>(r.flat_ansatz.size()) !=
        ds.manifest.layout.length()) {
      throw fail("flat_ansatz has length " +
                 std::to_string(r.flat_ansatz.size()) + ", expected " +
                 std::to_string(ds.manifest.layout.length()));
    }
    ++rows;
    if (filter_flagged && r.flagged()) continue;
    ds.records.push_back(std::move(r));
  }
  if (rows != ds.manifest.count) {
    throw fail("manifest declares " + std::to_string(ds.manifest.count) +
               " records, file has " + std::to_string(rows));
  }
  return ds;
}

void save(const Dataset& dataset, const std::filesystem::path& path) {
  write_text_file(path, serialize(dataset));
}

Dataset load(const std::filesystem::path& path, bool filter_flagged) {
  return parse_dataset(read_text_file(path), filter_flagged, path.string());
}

std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> split(
    const std::vector<SampleRecord>& records, double fraction,
    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split: fraction must lie in (0, 1)");
  }
  const std::size_t n = records.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  StreamRng rng(seed, 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> valid_idx(order.begin() + n_train, order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(valid_idx.begin(), valid_idx.end());
  std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> out;
  for (auto i : train_idx) out.first.push_back(records[i]);
  for (auto i : valid_idx) out.second.push_back(records[i]);
  return out;
}

}  // namespace kcqe
