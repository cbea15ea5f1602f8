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

#include "cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cpm/error.hpp"

namespace cpm::cli {
namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  std::string seed;
  std::string threads;
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->allow_extras();
  sub->add_option("--config", flags.config, "flat key=value config file");
  sub->add_option("--out", flags.out, "output CSV path");
  sub->add_option("--format", flags.format, "output format (csv)");
  sub->add_option("--seed", flags.seed, "Monte Carlo seed (u64)");
  sub->add_option("--threads", flags.threads, "worker threads");
}

// Remaining `--key value` / `--key=value` tokens become config overrides.
void apply_overrides(const std::vector<std::string>& extras,
                     RunConfig& config) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0 || token.size() < 3) {
      throw InvalidArgument("unexpected argument '" + token + "'");
    }
    std::string key = token.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else {
      if (i + 1 >= extras.size()) {
        throw InvalidArgument("missing value for '--" + key + "'");
      }
      value = extras[++i];
    }
    std::replace(key.begin(), key.end(), '-', '_');
    config.set(key, value);
  }
}

RunConfig build_config(const Flags& flags,
                       const std::vector<std::string>& extras) {
  RunConfig config;
  if (!flags.config.empty()) config.load_file(flags.config);
  apply_overrides(extras, config);
  if (!flags.out.empty()) config.set("out", flags.out);
  if (!flags.format.empty()) config.set("format", flags.format);
  if (!flags.seed.empty()) config.set("seed", flags.seed);
  if (!flags.threads.empty()) config.set("threads", flags.threads);
  return config;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"cpm: continuous photodetection model toolkit"};
  app.require_subcommand(1);
  Flags flags;

  using Writer = std::function<Written(const RunConfig&, std::ostream&)>;
  const std::vector<std::pair<std::string, std::pair<std::string, Writer>>>
      writers = {
          {"qjs-table", {"bright/dark/emission coefficients vs n", cmd_qjs_table}},
          {"snr-scan", {"signal-to-noise ratio vs bias b", cmd_snr_scan}},
          {"brightness", {"bright rate R_B vs field wavelength", cmd_brightness}},
          {"counts", {"mean counts and K_t vs R t (SD and E)", cmd_counts}},
          {"wt", {"mean waiting time and N_CAV vs R t", cmd_wt}},
      };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, spec] : writers) {
    subs[name] = app.add_subcommand(name, spec.first);
    add_common(subs[name], flags);
  }
  subs["verify"] =
      app.add_subcommand("verify", "closed forms against the oracles");
  add_common(subs["verify"], flags);
  subs["defaults"] =
      app.add_subcommand("defaults", "print constants and default parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (subs["defaults"]->parsed()) {
      cmd_defaults(out);
      return kExitOk;
    }
    for (const auto& [name, spec] : writers) {
      if (subs[name]->parsed()) {
        const RunConfig config = build_config(flags, subs[name]->remaining());
        spec.second(config, out);
        return kExitOk;
      }
    }
    const RunConfig config = build_config(flags, subs["verify"]->remaining());
    return cmd_verify(config, out) ? kExitOk : kExitVerification;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace cpm::cli
