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


// kcqe command-line entry point.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical
// failure, 1 anything else (I/O).

#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "kcqe/format.hpp"

namespace {

using kcqe::cli::ConfigError;
using kcqe::cli::json;

enum class Kind { kInt, kReal, kString, kRealList };

struct Flag {
  const char* name;
  const char* pointer;
  Kind kind;
  const char* help;
};

// Every flag overrides exactly one config key.
const std::vector<Flag>& flags() {
  static const std::vector<Flag> table = {
      {"--family", "/family/kind", Kind::kString, "pauli or hubbard"},
      {"--M", "/family/M", Kind::kInt, "qubit count (pauli)"},
      {"--L", "/family/L", Kind::kInt, "lattice sites (hubbard)"},
      {"--N", "/family/N", Kind::kInt, "particles (hubbard)"},
      {"--k", "/k", Kind::kInt, "number of ansatz layers"},
      {"--mode", "/mode", Kind::kString, "full, unitary or hermitian"},
      {"--U", "/solve/params", Kind::kReal, "interaction strength (solve)"},
      {"--params", "/solve/params", Kind::kRealList,
       "comma-separated physical parameters (solve)"},
      {"--sample-index", "/solve/sample_index", Kind::kInt,
       "solve the given draw of the regime"},
      {"--regime-name", "/regime/name", Kind::kString, "regime label"},
      {"--lower", "/regime/lower", Kind::kReal, "regime lower bound"},
      {"--upper", "/regime/upper", Kind::kReal, "regime upper bound"},
      {"--seed", "/regime/seed", Kind::kInt, "regime sampling seed"},
      {"--count", "/dataset/count", Kind::kInt, "number of samples"},
      {"--dataset", "/dataset/path", Kind::kString, "dataset file"},
      {"--model", "/model/path", Kind::kString, "model file"},
      {"--out", "/output_dir", Kind::kString, "output directory"},
      {"--workers", "/workers", Kind::kInt, "worker threads"},
      {"--max-iterations", "/solver/max_iterations", Kind::kInt,
       "L-BFGS iteration cap"},
      {"--gtol", "/solver/gradient_tolerance", Kind::kReal,
       "L-BFGS gradient tolerance"},
      {"--gradient", "/solver/gradient", Kind::kString,
       "analytic or finite_difference"},
      {"--ridge", "/solver/ridge", Kind::kReal,
       "penalty on Hermitian layer coefficients"},
      {"--width", "/mlp/hidden_width", Kind::kInt, "hidden width"},
      {"--depth", "/mlp/hidden_layers", Kind::kInt, "hidden blocks"},
      {"--activation", "/mlp/activation", Kind::kString, "relu or tanh"},
      {"--mlp-seed", "/mlp/seed", Kind::kInt, "weight initialization seed"},
      {"--epochs", "/train/epochs", Kind::kInt, "epoch budget"},
      {"--batch-size", "/train/batch_size", Kind::kInt, "mini-batch size"},
      {"--lr", "/train/learning_rate", Kind::kReal, "Adam learning rate"},
      {"--train-seed", "/train/seed", Kind::kInt, "batch order seed"},
      {"--split-seed", "/train/split_seed", Kind::kInt,
       "train/validation split seed"},
      {"--patience", "/train/patience", Kind::kInt,
       "early stop after this many epochs without improvement (0 = off)"},
      {"--monitor-samples", "/train/monitor_samples", Kind::kInt,
       "validation records for the per-epoch energy monitor"},
      {"--log-every", "/train/log_every", Kind::kInt, "epochs between logs"},
      {"--u-min", "/sweep/u_min", Kind::kReal, "sweep start"},
      {"--u-max", "/sweep/u_max", Kind::kReal, "sweep end"},
      {"--u-step", "/sweep/u_step", Kind::kReal, "sweep step"},
      {"--split", "/eval/split", Kind::kString, "validation, train or all"},
  };
  return table;
}

json convert(const Flag& f, const std::string& text) {
  std::size_t used = 0;
  try {
    switch (f.kind) {
      case Kind::kInt: {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case Kind::kReal: {
        const double v = std::stod(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case Kind::kString:
        return text;
      case Kind::kRealList: {
        json list = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const double v = std::stod(item, &used);
          if (used != item.size()) throw std::invalid_argument(item);
          list.push_back(v);
        }
        return list;
      }
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string("invalid value '") + text + "' for " + f.name);
}

struct Parsed {
  std::string config_path;
  std::map<std::string, std::string> values;  // flag name -> text
};

void add_flags(CLI::App* sub, Parsed& parsed) {
  sub->add_option("--config", parsed.config_path, "JSON config file");
  for (const auto& f : flags()) {
    sub->add_option_function<std::string>(
        f.name, [&parsed, name = f.name](const std::string& v) {
          parsed.values[name] = v;
        },
        f.help);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"k-layer contracted quantum eigensolver and its neural surrogate"};
  app.require_subcommand(1);
  Parsed parsed;
  using Command = std::function<int(const kcqe::cli::RunConfig&)>;
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"solve", "solve one Hamiltonian and compare with exact diagonalization",
       kcqe::cli::cmd_solve},
      {"gen", "generate a training dataset", kcqe::cli::cmd_gen},
      {"train", "train the surrogate network on a dataset",
       kcqe::cli::cmd_train},
      {"eval", "evaluate a trained surrogate against the exact oracle",
       kcqe::cli::cmd_eval},
      {"sweep", "energies over a U grid for the lattice model",
       kcqe::cli::cmd_sweep},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_flags(sub, parsed);
    subs.emplace_back(sub, fn);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  json effective = kcqe::cli::default_config();
  if (!parsed.config_path.empty()) {
    kcqe::cli::merge_into(effective,
                          kcqe::cli::read_config_file(parsed.config_path));
  }
  for (const auto& f : flags()) {
    auto it = parsed.values.find(f.name);
    if (it == parsed.values.end()) continue;
    effective[json::json_pointer(f.pointer)] = convert(f, it->second);
  }
  const kcqe::cli::RunConfig config =
      kcqe::cli::parse_run_config(std::move(effective));
  for (const auto& [sub, fn] : subs) {
    if (sub->parsed()) return fn(config);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const kcqe::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
