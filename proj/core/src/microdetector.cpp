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

#include "cpm/microdetector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "cpm/detail/parallel.hpp"
#include "cpm/error.hpp"

namespace cpm::micro {
namespace {

using cplx = std::complex<double>;

// omega0 / max(gamma, g) must exceed this for the rotating-wave treatment.
constexpr double kWeakCouplingRatio = 10.0;
// |B_n| floor; below it the two exponentials of S_n are nudged apart.
constexpr double kMinAbsB = 1e-8;

double omega_of(double lambda_nm) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / (lambda_nm * 1e-9);
}

cplx delta_of(const DetectorParams& params, const FieldMode& mode) {
  return {0.5 * detuning(params, mode), -0.5 * params.b};
}

// B_n on the branch aligned with delta (Re(B conj(delta)) >= 0), so that
// B + delta never cancels.
cplx aligned_b(int n, cplx delta, bool flip) {
  cplx b = std::sqrt(static_cast<double>(n) + delta * delta);
  if ((b * std::conj(delta)).real() < 0.0) b = -b;
  if (std::abs(b) < kMinAbsB) b = kMinAbsB;
  return flip ? -b : b;
}

void check_index(int n, int lowest, const char* what) {
  if (n < lowest) {
    std::ostringstream os;
    os << what << " needs n >= " << lowest << " (got " << n << ")";
    throw InvalidArgument(os.str());
  }
}

enum class Kind { kBright, kDark, kEmission };

using CacheKey =
    std::tuple<double, double, double, double, double, double, int, int>;

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CacheKey, double>& cache() {
  static std::map<CacheKey, double> c;
  return c;
}

template <class Compute>
double cached(const DetectorParams& p, const FieldMode& mode, int n, Kind kind,
              Compute compute) {
  const CacheKey key{p.lambda0_nm, p.g_hz,         p.b, p.nbar_det,
                     p.upsilon,    mode.lambda_nm, n,   static_cast<int>(kind)};
  {
    std::lock_guard lock(cache_mutex());
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  double value;
  try {
    value = compute();
  } catch (const NumericalError& e) {
    static constexpr const char* kNames[] = {"bright J^B", "dark J^D",
                                             "emission J^E"};
    std::ostringstream os;
    os << kNames[static_cast<int>(kind)] << " integral failed at n = " << n
       << ", b = " << p.b << ", lambda = " << mode.lambda_nm
       << " nm: " << e.what();
    throw NumericalError(os.str());
  }
  std::lock_guard lock(cache_mutex());
  cache().emplace(key, value);
  return value;
}

// 2 gamma (1 + nbar) (2 gamma nbar)^l / T
double series_prefactor(const DetectorParams& p, int order) {
  const double gamma = p.gamma();
  return 2.0 * gamma * (1.0 + p.nbar_det) *
         std::pow(2.0 * gamma * p.nbar_det, order) / p.averaging_time();
}

double envelope(const DetectorParams& p) {
  return p.gamma() * (2.0 * p.nbar_det + 1.0);
}

}  // namespace

double DetectorParams::averaging_time() const noexcept {
  return gamma() > 0.0 ? upsilon / gamma()
                       : std::numeric_limits<double>::infinity();
}

double DetectorParams::omega0() const noexcept { return omega_of(lambda0_nm); }

void DetectorParams::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidArgument(msg); };
  if (!(lambda0_nm > 0.0) || !std::isfinite(lambda0_nm)) {
    fail("lambda0 must be positive");
  }
  if (!(g_hz > 0.0) || !std::isfinite(g_hz)) fail("g must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) fail("b must be >= 0");
  if (!(nbar_det >= 0.0) || !std::isfinite(nbar_det)) {
    fail("nbar_det must be >= 0");
  }
  if (!(upsilon > 0.0) || !std::isfinite(upsilon)) {
    fail("upsilon must be positive");
  }
  const double ratio = omega0() / std::max(gamma(), g_hz);
  if (!(ratio > kWeakCouplingRatio)) {
    std::ostringstream os;
    os << "weak coupling violated: omega0/max(gamma, g) = " << ratio
       << " <= " << kWeakCouplingRatio;
    fail(os.str());
  }
}

double FieldMode::omega() const noexcept { return omega_of(lambda_nm); }

void FieldMode::validate() const {
  if (!(lambda_nm > 0.0) || !std::isfinite(lambda_nm)) {
    throw InvalidArgument("field wavelength must be positive");
  }
}

double detuning(const DetectorParams& params, const FieldMode& mode) {
  return (params.omega0() - mode.omega()) / params.g_hz;
}

DressedEval dressed_eval(const DetectorParams& params, const FieldMode& mode,
                         int n, double t_seconds) {
  check_index(n, 0, "dressed_eval");
  if (!(t_seconds >= 0.0)) throw InvalidArgument("dressed_eval needs t >= 0");
  DressedEval out;
  out.n = n;
  out.q = detuning(params, mode);
  out.delta = delta_of(params, mode);
  out.b_n = std::sqrt(static_cast<double>(n) + out.delta * out.delta);
  if (out.b_n.real() < 0.0) out.b_n = -out.b_n;

  const cplx z = params.g_hz * t_seconds * out.b_n;
  out.c_n = std::cos(z);
  out.s_n = std::abs(out.b_n) > 0.0 ? std::sin(z) / out.b_n
                                    : cplx(params.g_hz * t_seconds);
  const double phase = -0.5 * mode.omega() * t_seconds;
  out.chi_n = std::polar(1.0, phase) *
              (out.c_n - cplx(0.0, 1.0) * out.delta * out.s_n);
  return out;
}

expint::Factor chi_factor(const DetectorParams& params, const FieldMode& mode,
                          int n, bool flip_branch) {
  check_index(n, 0, "chi_factor");
  const cplx delta = delta_of(params, mode);
  const cplx b = aligned_b(n, delta, flip_branch);
  const cplx rate = cplx(0.0, params.g_hz) * b;
  const double nn = static_cast<double>(n);
  // chi = (1 - delta/B)/2 e^{i g B t} + (1 + delta/B)/2 e^{-i g B t}, with
  // whichever of B -/+ delta is small rewritten as n / (B +/- delta).
  cplx plus;
  cplx minus;
  if (std::abs(b + delta) >= std::abs(b - delta)) {
    plus = nn / (2.0 * b * (b + delta));
    minus = (b + delta) / (2.0 * b);
  } else {
    plus = (b - delta) / (2.0 * b);
    minus = nn / (2.0 * b * (b - delta));
  }
  return {expint::ExpTerm{plus, rate}, expint::ExpTerm{minus, -rate}};
}

expint::Factor s_factor(const DetectorParams& params, const FieldMode& mode,
                        int n, bool flip_branch) {
  check_index(n, 0, "s_factor");
  const cplx b = aligned_b(n, delta_of(params, mode), flip_branch);
  const cplx rate = cplx(0.0, params.g_hz) * b;
  const cplx coef = 1.0 / (cplx(0.0, 2.0) * b);
  return {expint::ExpTerm{coef, rate}, expint::ExpTerm{-coef, -rate}};
}

double bright_coeff(const DetectorParams& params, const FieldMode& mode,
                    int n) {
  check_index(n, 1, "bright_coeff");
  params.validate();
  mode.validate();
  if (params.b == 0.0) return 0.0;
  return cached(params, mode, n, Kind::kBright, [&] {
    const std::array<expint::Factor, 1> chain{s_factor(params, mode, n)};
    return series_prefactor(params, 0) *
           expint::chain_modulus_integral(chain, envelope(params),
                                          params.averaging_time());
  });
}

double dark_coeff(const DetectorParams& params, const FieldMode& mode, int n) {
  check_index(n, 0, "dark_coeff");
  params.validate();
  mode.validate();
  if (params.b == 0.0 || params.nbar_det == 0.0) return 0.0;
  return cached(params, mode, n, Kind::kDark, [&] {
    const std::array chain{chi_factor(params, mode, n + 1),
                           expint::reflected(chi_factor(params, mode, n))};
    return series_prefactor(params, 1) *
           expint::chain_modulus_integral(chain, envelope(params),
                                          params.averaging_time());
  });
}

double emission_coeff(const DetectorParams& params, const FieldMode& mode,
                      int n) {
  check_index(n, 0, "emission_coeff");
  params.validate();
  mode.validate();
  if (params.b == 0.0 || params.nbar_det == 0.0) return 0.0;
  return cached(params, mode, n, Kind::kEmission, [&] {
    // a^+ acts first: chi_{n+2}(t - t1) S_{n+1}(t1 - t2) chi_n(-t2).
    const std::array chain{chi_factor(params, mode, n + 2),
                           s_factor(params, mode, n + 1),
                           expint::reflected(chi_factor(params, mode, n))};
    return series_prefactor(params, 2) *
           expint::chain_modulus_integral(chain, envelope(params),
                                          params.averaging_time());
  });
}

double fit_beta(std::span<const double> jb) {
  if (jb.size() < 3) throw InvalidArgument("beta fit needs n_max >= 2");
  if (!(jb[1] > 0.0)) {
    throw UndefinedStatistic("beta fit needs a positive J_1^B");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double count = 0.0;
  for (std::size_t n = 2; n < jb.size(); ++n) {
    if (!(jb[n] > 0.0)) continue;
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(jb[n] / jb[1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count += 1.0;
  }
  if (count < 1.0) throw UndefinedStatistic("beta fit has no usable points");
  // Single point: slope through the anchor (log 1, 0).
  const double slope = count < 2.0 ? sxy / sxx
                                   : (count * sxy - sx * sy) /
                                         (count * sxx - sx * sx);
  return -0.5 * slope;
}

double fit_xi(std::span<const double> jd, double beta) {
  if (jd.size() < 2) throw InvalidArgument("xi fit needs n_max >= 1");
  if (!(jd[0] > 0.0)) throw UndefinedStatistic("xi fit needs J_0^D > 0");
  double s = 0.0;
  for (std::size_t n = 1; n < jd.size(); ++n) {
    s += jd[n] * std::pow(static_cast<double>(n), 2.0 * beta) / jd[0];
  }
  return s / static_cast<double>(jd.size() - 1);
}

QjsTable qjs_table(const DetectorParams& params, const FieldMode& mode,
                   int n_max, unsigned threads) {
  if (n_max < 2) throw InvalidArgument("qjs_table needs n_max >= 2");
  params.validate();
  mode.validate();
  QjsTable table;
  table.n_max = n_max;
  const auto size = static_cast<std::size_t>(n_max) + 1;
  table.jb.assign(size, 0.0);
  table.jd.assign(size, 0.0);
  table.je.assign(size, 0.0);
  detail::parallel_for(size, threads, [&](std::size_t i) {
    const int n = static_cast<int>(i);
    if (n >= 1) table.jb[i] = bright_coeff(params, mode, n);
    table.jd[i] = dark_coeff(params, mode, n);
    table.je[i] = emission_coeff(params, mode, n);
  });
  table.rb = table.jb[1];
  table.rd = table.jd[0];
  table.snr = table.rd > 0.0 ? table.rb / table.rd
                             : std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  table.beta_fit = table.rb > 0.0 ? fit_beta(table.jb) : nan;
  table.xi_fit = table.rd > 0.0 && std::isfinite(table.beta_fit)
                     ? fit_xi(table.jd, table.beta_fit)
                     : nan;
  return table;
}

SnrScan snr_scan(const DetectorParams& params, const FieldMode& mode,
                 std::span<const double> b_grid, unsigned threads,
                 double drop_fraction) {
  if (b_grid.empty()) throw InvalidArgument("snr_scan needs a non-empty b grid");
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    if (!(b_grid[i] > 0.0)) throw InvalidArgument("snr_scan needs b > 0");
    if (i > 0 && !(b_grid[i] > b_grid[i - 1])) {
      throw InvalidArgument("snr_scan needs an ascending b grid");
    }
  }
  if (!(drop_fraction > 0.0 && drop_fraction < 1.0)) {
    throw InvalidArgument("breakdown drop fraction must lie in (0, 1)");
  }

  SnrScan scan;
  scan.points.resize(b_grid.size());
  detail::parallel_for(b_grid.size(), threads, [&](std::size_t i) {
    DetectorParams p = params;
    p.b = b_grid[i];
    SnrPoint& pt = scan.points[i];
    pt.b = p.b;
    pt.rb = bright_coeff(p, mode, 1);
    pt.rd = dark_coeff(p, mode, 0);
    pt.snr = pt.rd > 0.0 ? pt.rb / pt.rd
                         : std::numeric_limits<double>::infinity();
  });

  if (b_grid.size() < 2) {
    throw PlateauUndefined("snr_scan needs at least two grid points to "
                           "define the low-b plateau");
  }
  const std::size_t quartile = std::max<std::size_t>(2, b_grid.size() / 4);
  std::vector<double> head;
  for (std::size_t i = 0; i < quartile; ++i) head.push_back(scan.points[i].snr);
  std::sort(head.begin(), head.end());
  const std::size_t mid = head.size() / 2;
  scan.plateau = head.size() % 2 == 1 ? head[mid]
                                      : 0.5 * (head[mid - 1] + head[mid]);
  if (!std::isfinite(scan.plateau) || !(scan.plateau > 0.0) ||
      (head.back() - head.front()) > 0.1 * scan.plateau) {
    throw PlateauUndefined(
        "S varies by more than 10% over the first quartile of the b grid; "
        "the grid does not start below breakdown");
  }

  const double threshold = drop_fraction * scan.plateau;
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    const SnrPoint& hi = scan.points[i];
    if (hi.snr < threshold) {
      const SnrPoint& lo = scan.points[i - 1];
      const double w = (lo.snr - threshold) / (lo.snr - hi.snr);
      scan.b_breakdown = lo.b + w * (hi.b - lo.b);
      break;
    }
  }
  return scan;
}

std::vector<BrightnessPoint> brightness_vs_wavelength(
    const DetectorParams& params, std::span<const double> lambda_grid_nm,
    unsigned threads) {
  std::vector<BrightnessPoint> out(lambda_grid_nm.size());
  for (double l : lambda_grid_nm) {
    if (!(l > 0.0)) throw InvalidArgument("wavelength grid must be positive");
  }
  detail::parallel_for(lambda_grid_nm.size(), threads, [&](std::size_t i) {
    out[i].lambda_nm = lambda_grid_nm[i];
    out[i].rb = bright_coeff(params, FieldMode{lambda_grid_nm[i]}, 1);
  });
  return out;
}

void clear_coefficient_cache() {
  std::lock_guard lock(cache_mutex());
  cache().clear();
}

}  // namespace cpm::micro
