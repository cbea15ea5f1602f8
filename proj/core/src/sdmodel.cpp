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

#include "cpm/sdmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpm/detail/special.hpp"
#include "cpm/error.hpp"
#include "cpm/kernels.hpp"

namespace cpm::sd {
namespace {

constexpr double kLogUnderflow = -745.0;

void check(const IdealizedDetector& det, double rt) {
  det.validate();
  if (det.variant != Variant::kSD) {
    throw InvalidArgument("SD-model routine called with an E-model detector");
  }
  if (!(rt >= 0.0) || !std::isfinite(rt)) {
    throw InvalidArgument("rt must be finite and >= 0");
  }
}

double phi_of(double rt) { return -std::expm1(-rt); }

double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

// Binomial(j, x) probabilities for k in [0, j], written into out[0..j].
void binomial_row(std::size_t j, double x, std::vector<double>& out) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(j + 1), 0.0);
  if (x <= 0.0) {
    out[0] = 1.0;
    return;
  }
  if (x >= 1.0) {
    out[j] = 1.0;
    return;
  }
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  const double mean = static_cast<double>(j) * x;
  const double width =
      12.0 * std::sqrt(static_cast<double>(j) * x * (1.0 - x)) + 40.0;
  const auto lo = static_cast<std::size_t>(std::max(0.0, mean - width));
  const auto hi = std::min<std::size_t>(
      j, static_cast<std::size_t>(std::ceil(mean + width)));
  for (std::size_t k = lo; k <= hi; ++k) {
    out[k] = std::exp(detail::log_binomial(j, k) +
                      static_cast<double>(k) * lx +
                      static_cast<double>(j - k) * l1x);
  }
}

}  // namespace

PhotonDistribution nocount(const PhotonDistribution& dist,
                           const IdealizedDetector& det, double rt) {
  check(det, rt);
  const auto in = dist.probs();
  const std::size_t size = in.size();
  std::vector<double> out(size, 0.0);
  const double lost = det.v() * phi_of(rt);
  const double log_lost = safe_log(lost);
  const double dark = -det.d * rt;
  for (std::size_t j = 0; j < size; ++j) {
    if (in[j] == 0.0) continue;
    const double log_rho = std::log(in[j]);
    // rho_j feeds n <= j with C(j, n) (v phi)^{j-n} e^{-n rt}.
    for (std::size_t n = 0; n <= j; ++n) {
      const double lw =
          n == j ? 0.0 : static_cast<double>(j - n) * log_lost;
      const double e = log_rho + detail::log_binomial(j, n) + lw -
                       static_cast<double>(n) * rt + dark;
      if (e > kLogUnderflow) out[n] += std::exp(e);
    }
  }
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

double nocount_trace(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double rt) {
  check(det, rt);
  // Each photon escapes registration with probability 1 - eta phi_t.
  const double keep = 1.0 - det.eta * phi_of(rt);
  double s = 0.0;
  double power = 1.0;
  for (double p : dist.probs()) {
    s += p * power;
    power *= keep;
  }
  return std::exp(-det.d * rt) * s;
}

double count_prob(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt, int m) {
  check(det, rt);
  if (m < 0) throw InvalidArgument("count index m must be >= 0");
  const double x = det.eta * phi_of(rt);
  const double dark = det.d * rt;
  const int k_max = std::min<int>(m, static_cast<int>(dist.n_max()));
  double s = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const int rest = m - k;
    double weight;
    if (dark > 0.0) {
      weight = std::exp(rest * std::log(dark) -
                        detail::log_factorial(static_cast<std::size_t>(rest)));
    } else {
      weight = rest == 0 ? 1.0 : 0.0;
    }
    if (weight == 0.0) continue;
    const auto shifted = kernels::apply_a_power_scaled(dist, k, x);
    s += weight * nocount_trace(shifted, det, rt);
  }
  return s;
}

std::vector<double> count_distribution(const PhotonDistribution& dist,
                                       const IdealizedDetector& det, double rt,
                                       std::size_t m_max) {
  check(det, rt);
  const auto in = dist.probs();
  const double x = det.eta * phi_of(rt);
  std::vector<double> bright(in.size(), 0.0);
  std::vector<double> row(in.size(), 0.0);
  for (std::size_t j = 0; j < in.size(); ++j) {
    if (in[j] == 0.0) continue;
    binomial_row(j, x, row);
    for (std::size_t k = 0; k <= j; ++k) bright[k] += in[j] * row[k];
  }
  const auto dark = detail::poisson_pmf(det.d * rt, m_max);
  std::vector<double> out(m_max + 1, 0.0);
  for (std::size_t m = 0; m <= m_max; ++m) {
    double s = 0.0;
    for (std::size_t k = 0; k <= std::min(m, bright.size() - 1); ++k) {
      s += bright[k] * dark[m - k];
    }
    out[m] = s;
  }
  return out;
}

CountStats moments(const PhotonDistribution& dist, const IdealizedDetector& det,
                   double rt) {
  check(det, rt);
  const double nbar = factorial_moment(dist, 1);
  const double f2 = factorial_moment(dist, 2);
  const double phi = phi_of(rt);
  const double dark = det.d * rt;
  const double bright = det.eta * phi;
  const double mbar = dark + bright * nbar;
  const double m2fac =
      dark * dark + 2.0 * nbar * dark * bright + bright * bright * f2;
  return finish_count_stats(rt, mbar, m2fac);
}

WtKernels wt_kernels(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double rt_first,
                     double tau) {
  check(det, rt_first);
  if (!(tau >= 0.0)) throw InvalidArgument("delay tau must be >= 0");
  const double y = 1.0 - det.eta * phi_of(tau) * std::exp(-rt_first);
  const auto in = dist.probs();
  WtKernels out;
  // sum_n rho_n n!/(n-k)! y^{n-k} for k = 0, 1, 2 in one pass.
  double power = 1.0;  // y^n
  double prev = 0.0;   // y^{n-1}
  double prev2 = 0.0;  // y^{n-2}
  for (std::size_t n = 0; n < in.size(); ++n) {
    const double nn = static_cast<double>(n);
    out.phi0 += in[n] * power;
    out.phi1 += in[n] * nn * prev;
    out.phi2 += in[n] * nn * (nn - 1.0) * prev2;
    prev2 = prev;
    prev = power;
    power *= y;
    if (prev2 == 0.0 && n > 2) break;
  }
  return out;
}

double wt_density(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt_first, double tau) {
  const WtKernels k = wt_kernels(dist, det, rt_first, tau);
  const double eta = det.eta;
  const double d = det.d;
  const double t = rt_first;
  return std::exp(-d * tau) *
         (eta * eta * std::exp(-(2.0 * t + tau)) * k.phi2 +
          eta * d * std::exp(-t) * (1.0 + std::exp(-tau)) * k.phi1 +
          d * d * k.phi0);
}

WaitingTimeCurve wt_curve(const PhotonDistribution& dist,
                          const IdealizedDetector& det, double rt_first,
                          std::vector<double> tau_grid, double theta) {
  check(det, rt_first);
  return make_wt_curve(
      rt_first,
      [&](double tau) { return wt_density(dist, det, rt_first, tau); },
      std::move(tau_grid), theta);
}

double mean_wt(const PhotonDistribution& dist, const IdealizedDetector& det,
               double rt_first, double theta) {
  return wt_curve(dist, det, rt_first, {}, theta).mean_wt;
}

double ncav(const PhotonDistribution& dist, double rt) {
  if (!(rt >= 0.0)) throw InvalidArgument("rt must be >= 0");
  return factorial_moment(dist, 1) * std::exp(-rt);
}

double counting_time(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double fraction) {
  check(det, 0.0);
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("counting-time fraction must lie in (0, 1)");
  }
  const double nbar = factorial_moment(dist, 1);
  if (!(nbar > 0.0) || !(det.eta > 0.0)) {
    throw UndefinedStatistic("counting time needs eta > 0 and nbar > 0");
  }
  const double target = fraction * det.eta * nbar;
  return solve_increasing(
      [&](double rt) {
        return det.d * rt + det.eta * nbar * phi_of(rt);
      },
      target, 1.0);
}

}  // namespace cpm::sd
