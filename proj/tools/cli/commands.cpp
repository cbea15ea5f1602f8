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

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>

#include "cli/output.hpp"
#include "cpm/detail/parallel.hpp"
#include "cpm/emodel.hpp"
#include "cpm/error.hpp"
#include "cpm/oracle.hpp"
#include "cpm/sdmodel.hpp"

namespace cpm::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Written emit(const RunConfig& config, const std::string& command,
             const CsvTable& table, const MetaEntries& results,
             std::ostream& log) {
  Written w;
  w.csv = resolve_output(config.get("out"), command + ".csv");
  w.meta = meta_path(w.csv);
  write_atomic(w.csv, table.str());
  write_atomic(w.meta, meta_text(config, results, command));
  log << "wrote " << w.csv.string() << " (" << table.rows() << " rows)\n";
  return w;
}

double k_or_nan(const std::function<CountStats()>& f) {
  try {
    return f().k_t;
  } catch (const UndefinedStatistic&) {
    return kNaN;
  }
}

std::vector<double> rt_grid(const RunConfig& config) {
  return linear_grid(config.get_double("rt_min"), config.get_double("rt_max"),
                     config.get_int("rt_points"));
}

}  // namespace

Written cmd_qjs_table(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto table = micro::qjs_table(
      config.detector_params(), config.field_mode(),
      static_cast<int>(config.get_int("qjs_n_max")), config.threads());
  CsvTable csv({"n", "jb", "jb_norm", "jd", "jd_norm", "je"});
  for (int n = 0; n <= table.n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    csv.add_row({static_cast<double>(n), table.jb[i],
                 n >= 1 && table.rb > 0.0 ? table.jb[i] / table.rb : kNaN,
                 table.jd[i], table.rd > 0.0 ? table.jd[i] / table.rd : kNaN,
                 table.je[i]});
  }
  return emit(config, "qjs-table", csv,
              {{"beta", format_double(table.beta_fit)},
               {"xi", format_double(table.xi_fit)},
               {"r_b", format_double(table.rb)},
               {"r_d", format_double(table.rd)},
               {"snr", format_double(table.snr)}},
              log);
}

Written cmd_snr_scan(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto grid =
      linear_grid(config.get_double("b_min"), config.get_double("b_max"),
                  config.get_int("b_points"));
  const auto scan = micro::snr_scan(config.detector_params(),
                                    config.field_mode(), grid,
                                    config.threads(),
                                    config.get_double("drop_fraction"));
  CsvTable csv({"b", "rb", "rd", "snr"});
  for (const auto& p : scan.points) csv.add_row({p.b, p.rb, p.rd, p.snr});
  return emit(config, "snr-scan", csv,
              {{"plateau", format_double(scan.plateau)},
               {"b_breakdown", scan.b_breakdown
                                   ? format_double(*scan.b_breakdown)
                                   : std::string("none")}},
              log);
}

Written cmd_brightness(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto grid = linear_grid(config.get_double("lambda_min_nm"),
                                config.get_double("lambda_max_nm"),
                                config.get_int("lambda_points"));
  const auto points = micro::brightness_vs_wavelength(
      config.detector_params(), grid, config.threads());
  CsvTable csv({"lambda_nm", "rb"});
  for (const auto& p : points) csv.add_row({p.lambda_nm, p.rb});
  return emit(config, "brightness", csv, {}, log);
}

Written cmd_counts(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto dist = config.state();
  const auto sd_det = config.detector(Variant::kSD);
  const auto e_det = config.detector(Variant::kE);
  const auto grid = rt_grid(config);
  std::vector<std::array<double, 4>> rows(grid.size());
  detail::parallel_for(grid.size(), config.threads(), [&](std::size_t i) {
    const double rt = grid[i];
    rows[i] = {sd::moments(dist, sd_det, rt).mbar,
               e::moments(dist, e_det, rt).mbar,
               k_or_nan([&] { return sd::moments(dist, sd_det, rt); }),
               k_or_nan([&] { return e::moments(dist, e_det, rt); })};
  });
  CsvTable csv({"rt", "mbar_sd", "mbar_e", "k_sd", "k_e"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.add_row({grid[i], rows[i][0], rows[i][1], rows[i][2], rows[i][3]});
  }
  return emit(config, "counts", csv,
              {{"state_nbar", format_double(dist.mean())},
               {"state_n_max", std::to_string(dist.n_max())}},
              log);
}

Written cmd_wt(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto dist = config.state();
  const Variant variant = parse_variant(config.get("model"));
  const auto det = config.detector(variant);
  const double theta = config.theta();
  const auto grid = rt_grid(config);
  std::vector<std::array<double, 2>> rows(grid.size());
  detail::parallel_for(grid.size(), config.threads(), [&](std::size_t i) {
    const double rt = grid[i];
    if (variant == Variant::kSD) {
      rows[i] = {sd::ncav(dist, rt), sd::mean_wt(dist, det, rt, theta)};
    } else {
      rows[i] = {e::ncav(dist, rt), e::mean_wt(dist, det, rt, theta)};
    }
  });
  CsvTable csv({"rt", "ncav", "mean_wt"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.add_row({grid[i], rows[i][0], rows[i][1]});
  }
  return emit(config, "wt", csv,
              {{"theta", format_double(theta)},
               {"model", to_string(variant)},
               {"state_n_max", std::to_string(dist.n_max())}},
              log);
}

namespace {

class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}

  void check(const std::string& name, double deviation, double tol,
             bool lower_is_pass = true) {
    const bool pass = lower_is_pass ? deviation <= tol : deviation >= tol;
    all_ &= pass;
    out_ << (pass ? "PASS " : "FAIL ") << name
         << " measured=" << format_double(deviation)
         << (lower_is_pass ? " tol<=" : " tol>=") << format_double(tol)
         << "\n";
  }

  bool all() const noexcept { return all_; }

 private:
  std::ostream& out_;
  bool all_ = true;
};

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

bool cmd_verify(const RunConfig& config, std::ostream& out) {
  config.validate();
  Report report(out);
  const double nbar = config.get_double("nbar");
  const auto seed = config.get_u64("seed");
  const auto n_traj = static_cast<std::uint64_t>(config.get_int("mc_traj"));

  for (Variant variant : {Variant::kSD, Variant::kE}) {
    const auto det = config.detector(variant);
    for (StateFamily family : {StateFamily::kCoherent, StateFamily::kNumber,
                               StateFamily::kThermal}) {
      const auto dist = make_state(family, nbar);
      for (double rt : {0.5, 1.0, 5.0, 20.0}) {
        const std::string tag = std::string(to_string(variant)) + "/" +
                                to_string(family) + "/rt=" +
                                format_double(rt);
        const std::size_t m_max = suggest_m_max(dist, det, rt);
        const auto p = variant == Variant::kSD
                           ? sd::count_distribution(dist, det, rt, m_max)
                           : e::count_distribution(dist, det, rt, m_max);
        const auto q = oracle::markov_counts(dist, det, rt, m_max);
        double sum = 0.0, gap = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t m = 0; m <= m_max; ++m) {
          const double mm = static_cast<double>(m);
          sum += p[m];
          gap = std::max(gap, std::abs(p[m] - q[m]));
          m1 += mm * p[m];
          m2 += mm * (mm - 1.0) * p[m];
        }
        const auto stats = variant == Variant::kSD
                               ? sd::moments(dist, det, rt)
                               : e::moments(dist, det, rt);
        report.check("completeness " + tag, std::abs(sum - 1.0), 1e-8);
        report.check("closed-vs-markov " + tag, gap, 1e-8);
        report.check("mean " + tag, rel(m1, stats.mbar), 1e-8);
        report.check("m2fac " + tag, rel(m2, stats.m2fac), 1e-8);
      }
    }

    const auto dist = config.state();
    const double rt = 1.0;
    const auto mc = oracle::mc_trajectories(dist, det, rt, n_traj, seed,
                                            config.threads(), 0);
    const auto exact =
        oracle::markov_counts(dist, det, rt, suggest_m_max(dist, det, rt));
    const auto chi = oracle::chi_square_test(mc.histogram, exact);
    const std::string tag = std::string(to_string(variant)) + "/" +
                            config.get("state") + "/rt=1";
    report.check("mc-chi2-pvalue " + tag, chi.p_value, 1e-3, false);
    const auto stats = variant == Variant::kSD ? sd::moments(dist, det, rt)
                                               : e::moments(dist, det, rt);
    report.check("mc-mean-sigmas " + tag,
                 std::abs(mc.mean() - stats.mbar) / mc.standard_error(), 3.0);
  }
  out << (report.all() ? "verify: all checks passed\n"
                       : "verify: FAILURES present\n");
  return report.all();
}

void cmd_defaults(std::ostream& out) {
  out << "# physical constants\n";
  out << "speed_of_light_m_s=" << format_double(micro::kSpeedOfLight) << "\n";
  out << "# configuration keys (key=default  # description)\n";
  for (const KeySpec& k : key_registry()) {
    out << k.key << "=" << k.default_value << "  # " << k.help << "\n";
  }
}

}  // namespace cpm::cli
