// Copyright 2026 The cpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"

namespace cpm::cli {

inline constexpr const char* kOutputDirEnv = "CPM_OUTPUT_DIR";

// Round-trippable, locale-independent decimal text ("nan", "inf" for
// non-finite values).
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::string str() const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

using MetaEntries = std::vector<std::pair<std::string, std::string>>;

// Every config key, then `result.*` entries, then `meta.*` entries.
std::string meta_text(const RunConfig& config, const MetaEntries& results,
                      const std::string& command);

// `out` if given, else `<default_name>`; relative paths are placed under
// $CPM_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& out,
                                     const std::string& default_name);

// Same stem with a `.meta` suffix.
std::filesystem::path meta_path(const std::filesystem::path& csv);

// Writes to a temporary sibling, then renames over the target.
void write_atomic(const std::filesystem::path& path,
                  const std::string& content);

}  // namespace cpm::cli
