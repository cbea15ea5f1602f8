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

#include "cli/output.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <locale>
#include <sstream>

#include "cpm/error.hpp"

namespace cpm::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) {
    throw InvalidArgument("CSV row width does not match the header");
  }
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i > 0) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string meta_text(const RunConfig& config, const MetaEntries& results,
                      const std::string& command) {
  std::string out;
  for (const auto& [key, value] : config.items()) {
    out += key + "=" + value + "\n";
  }
  for (const auto& [key, value] : results) {
    out += "result." + key + "=" + value + "\n";
  }
  out += "meta.command=" + command + "\n";
  out += "meta.version=0.1.0\n";
  return out;
}

std::filesystem::path resolve_output(const std::string& out,
                                     const std::string& default_name) {
  std::filesystem::path path = out.empty() ? default_name : out;
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      path = std::filesystem::path(dir) / path;
    }
  }
  return path;
}

std::filesystem::path meta_path(const std::filesystem::path& csv) {
  std::filesystem::path meta = csv;
  meta.replace_extension(".meta");
  return meta;
}

void write_atomic(const std::filesystem::path& path,
                  const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw InvalidArgument("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace cpm::cli
