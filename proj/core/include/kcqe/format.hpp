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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcqe {

/// File-system or parse failure in an artifact file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; round-trips every finite double exactly.
/// Non-finite values render as "nan", "inf" or "-inf".
std::string format_double(double x);

/// JSON number for finite x, `null` otherwise.
std::string json_double(double x);

/// Header plus rows, comma-separated, newline-terminated, doubles via
/// format_double. Every row must have header.size() entries.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Writes `contents` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace kcqe
