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

#include "cpm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "cpm/detail/special.hpp"
#include "cpm/error.hpp"

namespace cpm {

const char* to_string(Variant variant) noexcept {
  return variant == Variant::kSD ? "sd" : "e";
}

Variant parse_variant(const std::string& name) {
  if (name == "sd" || name == "SD") return Variant::kSD;
  if (name == "e" || name == "E") return Variant::kE;
  throw InvalidArgument("unknown detector variant '" + name + "'");
}

void IdealizedDetector::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("R must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("eta must lie in [0, 1]");
  }
  if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("d must be >= 0");
}

CountStats finish_count_stats(double rt, double mbar, double m2fac) {
  if (!(mbar > 0.0)) {
    std::ostringstream os;
    os << "K_t is undefined at rt = " << rt << " (mean count is zero)";
    throw UndefinedStatistic(os.str());
  }
  return {rt, mbar, m2fac, m2fac / (mbar * mbar)};
}

double default_theta(const IdealizedDetector& det) {
  if (!(det.eta > 0.0)) {
    throw InvalidArgument("default window 10/eta needs eta > 0");
  }
  return 10.0 / det.eta;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo + step * static_cast<double>(i);
  }
  out.back() = hi;
  return out;
}

WindowIntegrals integrate_window(const std::function<double(double)>& w,
                                 double theta, double rel_tol) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw InvalidArgument("averaging window theta must be > 0");
  }
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned kMaxDepth = 30;
  WindowIntegrals out;
  double error = 0.0;
  out.norm = Rule::integrate(w, 0.0, theta, kMaxDepth, rel_tol, &error);
  const double norm_error = error;
  out.first = Rule::integrate([&](double tau) { return tau * w(tau); }, 0.0,
                              theta, kMaxDepth, rel_tol, &error);
  out.error = std::max(norm_error / std::max(std::abs(out.norm), 1e-300),
                       error / std::max(std::abs(out.first), 1e-300));
  if (!std::isfinite(out.norm) || !std::isfinite(out.first)) {
    throw NumericalError("waiting-time window integral is not finite");
  }
  return out;
}

WindowIntegrals trapezoid_window(const std::function<double(double)>& w,
                                 double theta, int intervals) {
  if (!(theta > 0.0) || intervals < 1) {
    throw InvalidArgument("trapezoid window needs theta > 0, intervals >= 1");
  }
  const double h = theta / intervals;
  double s0 = 0.5 * (w(0.0) + w(theta));
  double s1 = 0.5 * theta * w(theta);
  for (int i = 1; i < intervals; ++i) {
    const double tau = h * i;
    const double value = w(tau);
    s0 += value;
    s1 += tau * value;
  }
  return {h * s0, h * s1, 0.0};
}

WaitingTimeCurve make_wt_curve(double rt_first,
                               const std::function<double(double)>& w,
                               std::vector<double> tau_grid, double theta) {
  if (!(rt_first >= 0.0)) throw InvalidArgument("first-click time must be >= 0");
  for (double tau : tau_grid) {
    if (!(tau >= 0.0 && tau <= theta)) {
      throw InvalidArgument("tau grid must lie inside [0, theta]");
    }
  }
  WaitingTimeCurve curve;
  curve.t = rt_first;
  curve.theta = theta;
  curve.w.reserve(tau_grid.size());
  for (double tau : tau_grid) curve.w.push_back(w(tau));
  curve.taus = std::move(tau_grid);
  const WindowIntegrals in = integrate_window(w, theta);
  curve.norm = in.norm;
  curve.mean_wt = in.norm > 0.0 ? in.first / in.norm
                                : std::numeric_limits<double>::quiet_NaN();
  return curve;
}

double solve_increasing(const std::function<double(double)>& f, double target,
                        double hi_guess) {
  double lo = 0.0;
  double hi = std::max(hi_guess, 1e-6);
  if (f(lo) >= target) return lo;
  int expansions = 0;
  while (f(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 80) {
      throw NumericalError("target level is never reached");
    }
  }
  auto g = [&](double x) { return f(x) - target; };
  std::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, boost::math::tools::eps_tolerance<double>(48), iterations);
  return 0.5 * (root.first + root.second);
}

std::size_t suggest_m_max(const PhotonDistribution& dist,
                          const IdealizedDetector& det, double rt) {
  constexpr double kCut = 1e-16;
  std::size_t bright = dist.n_max();
  if (det.variant == Variant::kE) {
    bright = std::min(bright, detail::poisson_window(rt, kCut).hi);
  }
  const double dark_mean = det.d * rt;
  const std::size_t dark =
      dark_mean > 0.0 ? detail::poisson_window(dark_mean, kCut).hi : 0;
  return bright + dark;
}

}  // namespace cpm
