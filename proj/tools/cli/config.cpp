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

#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cpm/error.hpp"

namespace cpm::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_known(const std::string& key) {
  const auto& reg = key_registry();
  return std::any_of(reg.begin(), reg.end(),
                     [&](const KeySpec& k) { return key == k.key; });
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* kind) {
  throw InvalidArgument("config key '" + key + "' expects " + kind +
                        ", got '" + value + "'");
}

}  // namespace

const std::vector<KeySpec>& key_registry() {
  static const std::vector<KeySpec> keys = {
      {"lambda0_nm", "500", "sensor resonance wavelength (nm)"},
      {"g_hz", "1e11", "sensor-field coupling g (Hz)"},
      {"b", "380", "bias ratio gamma/g"},
      {"nbar_det", "1e-11", "reservoir mean excitation number"},
      {"upsilon", "5e5", "averaging product gamma*T"},
      {"lambda_nm", "500", "field-mode wavelength (nm)"},
      {"qjs_n_max", "50", "largest n in the QJS table"},
      {"b_min", "20", "first bias ratio of the S scan"},
      {"b_max", "2000", "last bias ratio of the S scan"},
      {"b_points", "100", "number of bias ratios in the S scan"},
      {"drop_fraction", "0.5", "S/plateau level that defines breakdown"},
      {"lambda_min_nm", "300", "first wavelength of the brightness scan"},
      {"lambda_max_nm", "1500", "last wavelength of the brightness scan"},
      {"lambda_points", "121", "number of wavelengths in the brightness scan"},
      {"state", "coherent", "field state: coherent | number | thermal"},
      {"nbar", "100", "mean photon number of the field state"},
      {"n_max", "", "Fock truncation (empty: automatic)"},
      {"eta", "0.6", "quantum efficiency"},
      {"d", "5e-3", "dark-count rate in units of R"},
      {"rate_r", "1", "counting-rate constant R (Hz)"},
      {"model", "e", "detector model for wt: sd | e"},
      {"rt_min", "0.05", "first R t of the time grid"},
      {"rt_max", "250", "last R t of the time grid"},
      {"rt_points", "200", "number of R t grid points"},
      {"theta", "", "waiting-time window R theta (empty: 10/eta)"},
      {"mc_traj", "100000", "Monte Carlo trajectories for verify"},
      {"seed", "1", "Monte Carlo seed"},
      {"threads", "1", "worker threads"},
      {"out", "", "output path (empty: <command>.csv)"},
      {"format", "csv", "output format (csv only)"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const KeySpec& k : key_registry()) values_[k.key] = k.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!is_known(key)) throw InvalidArgument("unknown config key '" + key + "'");
  values_[key] = trim(value);
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected key=value";
      throw InvalidArgument(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.rfind("result.", 0) == 0 || key.rfind("meta.", 0) == 0) continue;
    set(key, line.substr(eq + 1));
  }
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& s = get(key);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad_value(key, s, "a number");
  }
  return x;
}

std::optional<double> RunConfig::get_optional_double(
    const std::string& key) const {
  if (get(key).empty()) return std::nullopt;
  return get_double(key);
}

long RunConfig::get_int(const std::string& key) const {
  const std::string& s = get(key);
  long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad_value(key, s, "an integer");
  }
  return x;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string& s = get(key);
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad_value(key, s, "an unsigned integer");
  }
  return x;
}

std::vector<std::pair<std::string, std::string>> RunConfig::items() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const KeySpec& k : key_registry()) out.emplace_back(k.key, get(k.key));
  return out;
}

micro::DetectorParams RunConfig::detector_params() const {
  micro::DetectorParams p;
  p.lambda0_nm = get_double("lambda0_nm");
  p.g_hz = get_double("g_hz");
  p.b = get_double("b");
  p.nbar_det = get_double("nbar_det");
  p.upsilon = get_double("upsilon");
  return p;
}

micro::FieldMode RunConfig::field_mode() const {
  return micro::FieldMode{get_double("lambda_nm")};
}

IdealizedDetector RunConfig::detector(Variant variant) const {
  return IdealizedDetector{variant, get_double("rate_r"), get_double("eta"),
                           get_double("d")};
}

StateFamily RunConfig::state_family() const {
  return parse_state_family(get("state").c_str());
}

PhotonDistribution RunConfig::state() const {
  std::optional<std::size_t> n_max;
  if (!get("n_max").empty()) {
    const long n = get_int("n_max");
    if (n < 0) throw InvalidArgument("n_max must be >= 0");
    n_max = static_cast<std::size_t>(n);
  }
  return make_state(state_family(), get_double("nbar"), n_max);
}

double RunConfig::theta() const {
  if (const auto t = get_optional_double("theta")) {
    if (!(*t > 0.0)) throw InvalidArgument("theta must be > 0");
    return *t;
  }
  return default_theta(detector(Variant::kE));
}

unsigned RunConfig::threads() const {
  const long t = get_int("threads");
  if (t < 1 || t > 1024) throw InvalidArgument("threads must lie in [1, 1024]");
  return static_cast<unsigned>(t);
}

void RunConfig::validate() const {
  // Parse every typed key so malformed values fail up front.
  detector_params().validate();
  field_mode().validate();
  detector(Variant::kSD).validate();
  state_family();
  parse_variant(get("model"));
  const double nbar = get_double("nbar");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw InvalidArgument("nbar must be >= 0");
  }
  if (!get("n_max").empty() && get_int("n_max") < 0) {
    throw InvalidArgument("n_max must be >= 0");
  }
  if (get_int("qjs_n_max") < 2) {
    throw InvalidArgument("qjs_n_max must be >= 2 (empty n range)");
  }
  const double b_min = get_double("b_min");
  const double b_max = get_double("b_max");
  if (!(b_min > 0.0) || !(b_max >= b_min) || get_int("b_points") < 1) {
    throw InvalidArgument("b grid needs 0 < b_min <= b_max, b_points >= 1");
  }
  const double drop = get_double("drop_fraction");
  if (!(drop > 0.0 && drop < 1.0)) {
    throw InvalidArgument("drop_fraction must lie in (0, 1)");
  }
  if (!(get_double("lambda_min_nm") > 0.0) ||
      !(get_double("lambda_max_nm") >= get_double("lambda_min_nm")) ||
      get_int("lambda_points") < 1) {
    throw InvalidArgument("wavelength grid is malformed");
  }
  if (!(get_double("rt_min") >= 0.0) ||
      !(get_double("rt_max") >= get_double("rt_min")) ||
      get_int("rt_points") < 1) {
    throw InvalidArgument("rt grid needs 0 <= rt_min <= rt_max, rt_points >= 1");
  }
  if (const auto t = get_optional_double("theta"); t && !(*t > 0.0)) {
    throw InvalidArgument("theta must be > 0");
  }
  if (get_int("mc_traj") < 1) throw InvalidArgument("mc_traj must be >= 1");
  get_u64("seed");
  threads();
  if (get("format") != "csv") {
    throw InvalidArgument("unsupported output format '" + get("format") + "'");
  }
}

std::vector<double> linear_grid(double lo, double hi, long points) {
  if (points < 1) throw InvalidArgument("grid needs at least one point");
  if (points == 1) return {lo};
  return uniform_grid(lo, hi, static_cast<std::size_t>(points));
}

}  // namespace cpm::cli
