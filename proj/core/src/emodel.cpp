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

#include "cpm/emodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpm/detail/special.hpp"
#include "cpm/error.hpp"
#include "cpm/kernels.hpp"

namespace cpm::e {
namespace {

// Incomplete-gamma weights below this are dropped from the x-integral.
constexpr double kGammaCut = 1e-22;

void check(const IdealizedDetector& det, double rt) {
  det.validate();
  if (det.variant != Variant::kE) {
    throw InvalidArgument("E-model routine called with an SD-model detector");
  }
  if (!(rt >= 0.0) || !std::isfinite(rt)) {
    throw InvalidArgument("rt must be finite and >= 0");
  }
}

double pmf(std::size_t k, double lambda) {
  return std::exp(detail::log_poisson_pmf(k, lambda));
}

double binomial_pmf(std::size_t s, std::size_t k, double p) {
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == s ? 1.0 : 0.0;
  return std::exp(detail::log_binomial(s, k) +
                  static_cast<double>(k) * std::log(p) +
                  static_cast<double>(s - k) * std::log1p(-p));
}

// Tail sums T_j = sum_{n >= j} x_n, with T_{size} = 0 appended.
std::vector<double> tails(std::span<const double> x) {
  std::vector<double> out(x.size() + 1, 0.0);
  for (std::size_t j = x.size(); j-- > 0;) out[j] = out[j + 1] + x[j];
  return out;
}

// Precomputed pieces of the m-count superoperator shared by every m.
class CountEvaluator {
 public:
  CountEvaluator(const PhotonDistribution& dist, const IdealizedDetector& det,
                 double rt)
      : rho_(dist.probs().begin(), dist.probs().end()),
        eta_(det.eta),
        v_(det.v()),
        dark_(det.d * rt) {
    const std::size_t size = rho_.size();
    absorb_.resize(size);
    for (std::size_t k = 0; k < size; ++k) absorb_[k] = pmf(k, eta_ * rt);

    // term1 = sum_i g_i z_i with g_i = sum_{j<=i} Pois(v t; j)(1 - v^{i-j}).
    std::vector<double> lost(size);
    for (std::size_t j = 0; j < size; ++j) lost[j] = pmf(j, v_ * rt);
    g_.assign(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      double s = 0.0;
      double vp = 1.0;  // v^{i-j}
      for (std::size_t j = i + 1; j-- > 0;) {
        if (vp == 0.0 && lost[j] == 0.0) continue;
        s += lost[j] * (1.0 - vp);
        vp *= v_;
      }
      g_[i] = s;
    }

    double vp = 1.0;
    for (double p : rho_) {
      vacuum_sum_ += vp * p;
      vp *= v_;
    }

    // x-integral pieces: P(s+1, t) and sum_l v^l rho_{1+s+l}.
    const auto tail = kernels::eps_resolvent_series(dist, v_, 1);
    for (std::size_t s = 0; s + 1 < size; ++s) {
      const double weight = detail::gamma_p(static_cast<double>(s) + 1.0, rt);
      if (weight < kGammaCut) break;
      gamma_.push_back(weight);
      shifted_.push_back(tail[s]);
    }
  }

  double operator()(std::size_t m) const {
    const std::size_t size = rho_.size();
    const auto dark = detail::poisson_pmf(dark_, m);
    // z = (J t)^m / m! rho with e^{-(eta + d) t} folded into the weights.
    double term1 = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      if (g_[i] == 0.0) continue;
      double z = 0.0;
      const std::size_t k_hi = std::min(m, size - 1 - i);
      for (std::size_t k = 0; k <= k_hi; ++k) {
        const double w = absorb_[k] * dark[m - k];
        z += w * rho_[i + k];
      }
      term1 += g_[i] * z;
    }

    const double term2 = dark[m] * vacuum_sum_;

    double term3 = 0.0;
    if (m >= 1 && eta_ > 0.0) {
      for (std::size_t s = 0; s < gamma_.size(); ++s) {
        if (shifted_[s] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t k = 0; k <= std::min(s, m - 1); ++k) {
          inner += binomial_pmf(s, k, eta_) * dark[m - 1 - k];
        }
        term3 += inner * gamma_[s] * shifted_[s];
      }
      term3 *= eta_;
    }
    return term1 + term2 + term3;
  }

 private:
  std::vector<double> rho_;
  double eta_;
  double v_;
  double dark_;
  std::vector<double> absorb_;
  std::vector<double> g_;
  double vacuum_sum_ = 0.0;
  std::vector<double> gamma_;
  std::vector<double> shifted_;
};

}  // namespace

PhotonDistribution nocount(const PhotonDistribution& dist,
                           const IdealizedDetector& det, double rt) {
  check(det, rt);
  const double v = det.v();
  const auto evolved = kernels::e_semigroup(dist, rt, v);
  const auto resolved = kernels::eps_resolvent_series(dist, v, 0);
  const auto resolved_evolved = kernels::e_semigroup(resolved, rt, v);
  const double slot = resolved[0] - resolved_evolved[0];
  const double damp = std::exp(-det.d * rt);
  std::vector<double> out(evolved.probs().begin(), evolved.probs().end());
  out[0] += slot;
  for (double& x : out) x *= damp;
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

double nocount_trace(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double rt) {
  return nocount(dist, det, rt).total();
}

double count_prob(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt, int m) {
  check(det, rt);
  if (m < 0) throw InvalidArgument("count index m must be >= 0");
  return CountEvaluator(dist, det, rt)(static_cast<std::size_t>(m));
}

std::vector<double> count_distribution(const PhotonDistribution& dist,
                                       const IdealizedDetector& det, double rt,
                                       std::size_t m_max) {
  check(det, rt);
  const CountEvaluator eval(dist, det, rt);
  std::vector<double> out(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) out[m] = eval(m);
  return out;
}

Kernels kernels(const PhotonDistribution& dist, double rt) {
  if (!(rt >= 0.0)) throw InvalidArgument("rt must be >= 0");
  const double nbar = factorial_moment(dist, 1);
  if (!(nbar > 0.0)) {
    throw UndefinedStatistic("Xi_k is undefined for a zero-mean state");
  }
  const auto evolved = kernels::e_semigroup(dist, rt, 1.0);
  Kernels out;
  out.p0_surv = evolved.total();
  const auto x = evolved.probs();
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t n = 1; n < x.size(); ++n) {
    s1 += static_cast<double>(n) * x[n];
    s2 += static_cast<double>(n - 1) * x[n];
  }
  out.xi1 = s1 / nbar;
  out.xi2 = s2 / nbar;
  const double f2 = factorial_moment(dist, 2);
  out.omega = f2 > 0.0 ? factorial_moment(evolved, 2) / f2
                       : std::numeric_limits<double>::quiet_NaN();
  return out;
}

AbsorptionMoments absorption_moments(const PhotonDistribution& dist,
                                     double rt) {
  if (!(rt >= 0.0)) throw InvalidArgument("rt must be >= 0");
  const auto t = tails(dist.probs());
  AbsorptionMoments out;
  // P(A >= s+1) = sum_{n > s} rho_n P(N_t >= s+1).
  for (std::size_t s = 0; s + 1 < t.size(); ++s) {
    if (t[s + 1] == 0.0) continue;
    const double a = static_cast<double>(s);
    out.first += detail::gamma_p(a + 1.0, rt) * t[s + 1];
    if (s + 2 < t.size()) {
      out.second += 2.0 * (a + 1.0) * detail::gamma_p(a + 2.0, rt) * t[s + 2];
    }
  }
  return out;
}

CountStats moments(const PhotonDistribution& dist, const IdealizedDetector& det,
                   double rt) {
  check(det, rt);
  const AbsorptionMoments a = absorption_moments(dist, rt);
  const double dark = det.d * rt;
  const double eta = det.eta;
  const double mbar = dark + eta * a.first;
  const double m2fac =
      dark * dark + 2.0 * eta * dark * a.first + eta * eta * a.second;
  return finish_count_stats(rt, mbar, m2fac);
}

namespace {

// W_t(tau) with sigma = (eta eps + d) P_t^0 rho reduced to tail sums.
class WtEvaluator {
 public:
  WtEvaluator(const PhotonDistribution& dist, const IdealizedDetector& det,
              double rt_first)
      : eta_(det.eta), d_(det.d), v_(det.v()) {
    const auto x = kernels::e_semigroup(dist, rt_first, 1.0);
    const auto xs = x.probs();
    std::vector<double> sigma(xs.size(), 0.0);
    for (std::size_t n = 0; n < xs.size(); ++n) {
      sigma[n] = d_ * xs[n] + (n + 1 < xs.size() ? eta_ * xs[n + 1] : 0.0);
    }
    vacuum_ = d_ * d_ * (1.0 - x.total());
    tails_ = tails(sigma);
    const auto sig = PhotonDistribution::unnormalized(sigma, dist.tail_tol());
    const auto u = kernels::eps_resolvent_series(sig, v_, 0);
    resolved_.assign(u.probs().begin(), u.probs().end());
  }

  double operator()(double tau) const {
    // Weights e^{-tau} (v tau)^j / j! of P_tau.
    const std::size_t size = resolved_.size();
    double bright = 0.0;  // Tr eps P_tau sigma
    double trace = 0.0;   // Tr P_tau sigma
    double vac = 0.0;     // (P_tau u)_0
    const double lambda = v_ * tau;
    const auto window = detail::poisson_window(lambda);
    const std::size_t hi = std::min(window.hi, size - 1);
    for (std::size_t j = window.lo; j <= hi; ++j) {
      const double w =
          lambda > 0.0
              ? std::exp(-tau + static_cast<double>(j) * std::log(lambda) -
                         detail::log_factorial(j))
              : (j == 0 ? std::exp(-tau) : 0.0);
      bright += w * tails_[j + 1];
      trace += w * tails_[j];
      vac += w * resolved_[j];
    }
    const double slot = resolved_[0] - vac;
    return std::exp(-d_ * tau) *
           (vacuum_ + eta_ * bright + d_ * trace + d_ * slot);
  }

 private:
  double eta_;
  double d_;
  double v_;
  double vacuum_ = 0.0;
  std::vector<double> tails_;
  std::vector<double> resolved_;
};

}  // namespace

double wt_density(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt_first, double tau) {
  check(det, rt_first);
  if (!(tau >= 0.0)) throw InvalidArgument("delay tau must be >= 0");
  return WtEvaluator(dist, det, rt_first)(tau);
}

WaitingTimeCurve wt_curve(const PhotonDistribution& dist,
                          const IdealizedDetector& det, double rt_first,
                          std::vector<double> tau_grid, double theta) {
  check(det, rt_first);
  const WtEvaluator eval(dist, det, rt_first);
  return make_wt_curve(rt_first, std::cref(eval), std::move(tau_grid), theta);
}

double mean_wt(const PhotonDistribution& dist, const IdealizedDetector& det,
               double rt_first, double theta) {
  return wt_curve(dist, det, rt_first, {}, theta).mean_wt;
}

double ncav(const PhotonDistribution& dist, double rt) {
  if (!(rt >= 0.0)) throw InvalidArgument("rt must be >= 0");
  const auto t = tails(dist.probs());
  double s = 0.0;
  for (std::size_t j = 1; j + 1 < t.size(); ++j) {
    if (t[j] == 0.0) continue;
    s += detail::gamma_q(static_cast<double>(j), rt) * t[j];
  }
  return s;
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
        return det.d * rt + det.eta * absorption_moments(dist, rt).first;
      },
      target, nbar);
}

}  // namespace cpm::e
