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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpm/detector.hpp"
#include "cpm/fock.hpp"
#include "cpm/microdetector.hpp"

namespace cpm::cli {

struct KeySpec {
  const char* key;
  const char* default_value;  // empty: unset / automatic
  const char* help;
};

// Every accepted configuration key, in output order.
const std::vector<KeySpec>& key_registry();

// Flat key=value parameter set. Unknown keys are rejected on assignment.
class RunConfig {
 public:
  RunConfig();

  void set(const std::string& key, const std::string& value);
  // Reads `key = value` lines; '#' starts a comment. Keys with a `result.`
  // or `meta.` prefix (written into .meta sidecars) are skipped.
  void load_file(const std::string& path);

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;

  std::vector<std::pair<std::string, std::string>> items() const;

  micro::DetectorParams detector_params() const;
  micro::FieldMode field_mode() const;
  IdealizedDetector detector(Variant variant) const;
  StateFamily state_family() const;
  PhotonDistribution state() const;
  // theta from the config, or the 10/eta default.
  double theta() const;
  unsigned threads() const;

  // Checks every physical parameter and grid before any computation.
  void validate() const;

 private:
  std::map<std::string, std::string> values_;
};

std::vector<double> linear_grid(double lo, double hi, long points);

}  // namespace cpm::cli
