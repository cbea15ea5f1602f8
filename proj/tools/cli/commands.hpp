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
#include <ostream>

#include "cli/config.hpp"

namespace cpm::cli {

struct Written {
  std::filesystem::path csv;
  std::filesystem::path meta;
};

Written cmd_qjs_table(const RunConfig& config, std::ostream& log);
Written cmd_snr_scan(const RunConfig& config, std::ostream& log);
Written cmd_brightness(const RunConfig& config, std::ostream& log);
Written cmd_counts(const RunConfig& config, std::ostream& log);
Written cmd_wt(const RunConfig& config, std::ostream& log);

// Oracle-vs-closed-form suite; one PASS/FAIL line per check. Returns true
// when every check passes.
bool cmd_verify(const RunConfig& config, std::ostream& out);

void cmd_defaults(std::ostream& out);

}  // namespace cpm::cli
