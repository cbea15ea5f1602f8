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

#include "cpm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "cpm/detail/parallel.hpp"
#include "cpm/detail/special.hpp"
#include "cpm/error.hpp"
#include "cpm/rng.hpp"

namespace cpm::oracle {
namespace {

// Uniformization keeps Poisson terms down to this fraction of the mode.
constexpr double kPoissonCut = 1e-17;
constexpr double kLeakTol = 1e-10;
// Joint chains with more state-steps than this fall back to the product
// form in markov_counts.
constexpr double kJointBudget = 3e7;
constexpr std::uint64_t kChunk = 4096;

void check(const IdealizedDetector& det, double rt) {
  det.validate();
  if (!(rt >= 0.0) || !std::isfinite(rt)) {
    throw InvalidArgument("rt must be finite and >= 0");
  }
}

double bright_rate(Variant variant, std::size_t n) {
  if (n == 0) return 0.0;
  return variant == Variant::kSD ? static_cast<double>(n) : 1.0;
}

[[noreturn]] void throw_leak(double leaked, std::size_t m_max,
                             std::size_t suggested) {
  std::ostringstream os;
  os << "count bound m_max = " << m_max << " loses " << leaked
     << " of the probability mass; use m_max >= " << suggested;
  throw TruncationError(os.str(), suggested);
}

// Poisson(lambda) weights over [0, window.hi].
std::vector<double> poisson_weights(double lambda) {
  const auto window = detail::poisson_window(lambda, kPoissonCut);
  std::vector<double> w(window.hi + 1, 0.0);
  for (std::size_t k = window.lo; k <= window.hi; ++k) {
    w[k] = std::exp(detail::log_poisson_pmf(k, lambda));
  }
  return w;
}

// Pure-birth chain on 0..m_max at rate `rate` for time rt, with the mass
// that leaves the top state returned through `leaked`.
std::vector<double> birth_chain(double rate, double rt, std::size_t m_max,
                                double& leaked) {
  std::vector<double> cur(m_max + 1, 0.0);
  cur[0] = 1.0;
  leaked = 0.0;
  if (rate * rt == 0.0) return cur;
  const auto w = poisson_weights(rate * rt);
  std::vector<double> out(m_max + 1, 0.0);
  double lost = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    for (std::size_t m = 0; m <= m_max; ++m) out[m] += w[k] * cur[m];
    leaked += w[k] * lost;
    // One uniformized step: every state advances by one.
    lost += cur[m_max];
    for (std::size_t m = m_max; m > 0; --m) cur[m] = cur[m - 1];
    cur[0] = 0.0;
  }
  return out;
}

}  // namespace

double JointState::total() const {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

std::vector<double> JointState::count_marginal() const {
  std::vector<double> out(m_max + 1, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = 0; m <= m_max; ++m) out[m] += at(n, m);
  }
  return out;
}

JointState markov_joint(const PhotonDistribution& dist,
                        const IdealizedDetector& det, double rt,
                        std::size_t m_max) {
  check(det, rt);
  const std::size_t n_max = dist.n_max();
  const std::size_t cols = m_max + 1;
  std::vector<double> cur((n_max + 1) * cols, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) cur[n * cols] = dist[n];
  const double mass0 = dist.total();

  JointState state;
  state.n_max = n_max;
  state.m_max = m_max;

  double top = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    top = std::max(top, bright_rate(det.variant, n));
  }
  const double lambda = top + det.d;
  if (lambda * rt == 0.0) {
    state.p = std::move(cur);
    return state;
  }

  const auto w = poisson_weights(lambda * rt);
  std::vector<double> out(cur.size(), 0.0);
  std::vector<double> next(cur.size(), 0.0);
  const double eta = det.eta;
  const double v = det.v();
  const double dark = det.d / lambda;
  double lost = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != 0.0) {
      for (std::size_t i = 0; i < cur.size(); ++i) out[i] += w[k] * cur[i];
      state.leaked += w[k] * lost;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t n = 0; n <= n_max; ++n) {
      const double bright = bright_rate(det.variant, n) / lambda;
      const double stay = 1.0 - bright - dark;
      for (std::size_t m = 0; m <= m_max; ++m) {
        const double mass = cur[n * cols + m];
        if (mass == 0.0) continue;
        next[n * cols + m] += stay * mass;
        if (bright > 0.0) {
          const double b = bright * mass;
          next[(n - 1) * cols + m] += v * b;
          if (m < m_max) {
            next[(n - 1) * cols + m + 1] += eta * b;
          } else {
            lost += eta * b;
          }
        }
        if (m < m_max) {
          next[n * cols + m + 1] += dark * mass;
        } else {
          lost += dark * mass;
        }
      }
    }
    cur.swap(next);
    const double held = std::accumulate(cur.begin(), cur.end(), 0.0) + lost;
    if (std::abs(held - mass0) > 1e-12 * std::max(mass0, 1.0)) {
      throw NumericalError("uniformized chain failed to conserve mass");
    }
  }
  if (state.leaked > kLeakTol) {
    throw_leak(state.leaked, m_max, suggest_m_max(dist, det, rt));
  }
  state.p = std::move(out);
  return state;
}

std::vector<double> markov_counts_product(const PhotonDistribution& dist,
                                          const IdealizedDetector& det,
                                          double rt, std::size_t m_max) {
  check(det, rt);
  if (det.variant != Variant::kSD) {
    throw InvalidArgument("the per-photon decomposition holds for SD only");
  }
  // Single photon: present -> registered (eta) or lost (v) at rate 1.
  std::array<double, 3> photon{0.0, 0.0, 0.0};
  {
    std::array<double, 3> cur{1.0, 0.0, 0.0};
    for (double wk : poisson_weights(rt)) {
      for (int s = 0; s < 3; ++s) photon[s] += wk * cur[s];
      cur = {0.0, cur[1] + det.eta * cur[0], cur[2] + det.v() * cur[0]};
    }
  }
  const double reg = photon[1];

  const auto rho = dist.probs();
  std::vector<double> law(rho.size(), 0.0);
  std::vector<double> bright(rho.size(), 0.0);
  law[0] = 1.0;
  for (std::size_t n = 0; n < rho.size(); ++n) {
    if (n > 0) {
      for (std::size_t k = n; k > 0; --k) {
        law[k] = law[k] * (1.0 - reg) + law[k - 1] * reg;
      }
      law[0] *= 1.0 - reg;
    }
    if (rho[n] == 0.0) continue;
    for (std::size_t k = 0; k <= n; ++k) bright[k] += rho[n] * law[k];
  }

  double dark_leak = 0.0;
  const auto dark = birth_chain(det.d, rt, m_max, dark_leak);
  std::vector<double> out(m_max + 1, 0.0);
  for (std::size_t m = 0; m <= m_max; ++m) {
    double s = 0.0;
    for (std::size_t k = 0; k <= std::min(m, bright.size() - 1); ++k) {
      s += bright[k] * dark[m - k];
    }
    out[m] = s;
  }
  const double leaked =
      dist.total() - std::accumulate(out.begin(), out.end(), 0.0);
  if (leaked > kLeakTol) {
    throw_leak(leaked, m_max, suggest_m_max(dist, det, rt));
  }
  return out;
}

std::vector<double> markov_counts(const PhotonDistribution& dist,
                                  const IdealizedDetector& det, double rt,
                                  std::size_t m_max) {
  check(det, rt);
  if (det.variant == Variant::kSD) {
    const double n = static_cast<double>(dist.n_max());
    const double work = (n + det.d) * rt * (n + 1.0) *
                        (static_cast<double>(m_max) + 1.0);
    if (work > kJointBudget) {
      return markov_counts_product(dist, det, rt, m_max);
    }
  }
  return markov_joint(dist, det, rt, m_max).count_marginal();
}

namespace {

std::size_t sample_photons(std::span<const double> cdf, rng::Stream& stream) {
  const double u = stream.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cdf.begin(),
                               static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

ClickRecord simulate(std::span<const double> cdf, const IdealizedDetector& det,
                     double rt_end, std::uint64_t seed, std::uint64_t index) {
  rng::Stream stream(seed, index);
  ClickRecord rec;
  rec.seed = seed;
  rec.trajectory = index;
  std::size_t n = sample_photons(cdf, stream);

  std::vector<double> bright;
  double t = 0.0;
  while (n > 0) {
    t += stream.exponential(bright_rate(det.variant, n));
    if (t > rt_end) break;
    --n;
    if (stream.uniform() < det.eta) bright.push_back(t);
  }
  std::vector<double> dark;
  if (det.d > 0.0) {
    t = 0.0;
    for (;;) {
      t += stream.exponential(det.d);
      if (t > rt_end) break;
      dark.push_back(t);
    }
  }

  rec.times.reserve(bright.size() + dark.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < bright.size() || j < dark.size()) {
    if (j == dark.size() || (i < bright.size() && bright[i] <= dark[j])) {
      rec.times.push_back(bright[i++]);
      rec.kinds.push_back(ClickKind::kBright);
    } else {
      rec.times.push_back(dark[j++]);
      rec.kinds.push_back(ClickKind::kDark);
    }
  }
  return rec;
}

std::vector<double> cumulative(const PhotonDistribution& dist) {
  std::vector<double> cdf(dist.size());
  std::partial_sum(dist.probs().begin(), dist.probs().end(), cdf.begin());
  if (!(cdf.back() > 0.0)) {
    throw InvalidArgument("photon distribution carries no mass");
  }
  return cdf;
}

std::uint64_t chunk_count(std::uint64_t n_traj) {
  return (n_traj + kChunk - 1) / kChunk;
}

}  // namespace

ClickRecord simulate_trajectory(const PhotonDistribution& dist,
                                const IdealizedDetector& det, double rt_end,
                                std::uint64_t seed, std::uint64_t index) {
  check(det, rt_end);
  return simulate(cumulative(dist), det, rt_end, seed, index);
}

double McCounts::mean() const {
  double s = 0.0;
  for (std::size_t m = 0; m < histogram.size(); ++m) {
    s += static_cast<double>(m) * static_cast<double>(histogram[m]);
  }
  return s / static_cast<double>(n_traj);
}

double McCounts::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t m = 0; m < histogram.size(); ++m) {
    const double dm = static_cast<double>(m) - mu;
    s += dm * dm * static_cast<double>(histogram[m]);
  }
  return n_traj > 1 ? s / static_cast<double>(n_traj - 1) : 0.0;
}

double McCounts::standard_error() const {
  return std::sqrt(variance() / static_cast<double>(n_traj));
}

McCounts mc_trajectories(const PhotonDistribution& dist,
                         const IdealizedDetector& det, double rt,
                         std::uint64_t n_traj, std::uint64_t seed,
                         unsigned threads, std::size_t sample_size) {
  check(det, rt);
  if (n_traj < 1) throw InvalidArgument("n_traj must be >= 1");
  const auto cdf = cumulative(dist);
  const std::uint64_t chunks = chunk_count(n_traj);
  std::vector<std::vector<std::uint64_t>> partial(chunks);
  McCounts result;
  result.n_traj = n_traj;
  result.sample.resize(std::min<std::uint64_t>(sample_size, n_traj));

  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    auto& hist = partial[c];
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t hi = std::min(n_traj, lo + kChunk);
    for (std::uint64_t i = lo; i < hi; ++i) {
      ClickRecord rec = simulate(cdf, det, rt, seed, i);
      const std::size_t m = rec.times.size();
      if (hist.size() <= m) hist.resize(m + 1, 0);
      ++hist[m];
      if (i < result.sample.size()) result.sample[i] = std::move(rec);
    }
  });

  for (const auto& hist : partial) {
    if (result.histogram.size() < hist.size()) {
      result.histogram.resize(hist.size(), 0);
    }
    for (std::size_t m = 0; m < hist.size(); ++m) result.histogram[m] += hist[m];
  }
  return result;
}

ChiSquare chi_square_test(const std::vector<std::uint64_t>& histogram,
                          const std::vector<double>& probs,
                          double min_expected) {
  std::uint64_t total = 0;
  for (auto h : histogram) total += h;
  if (total == 0) throw InsufficientStatistics("empty histogram");
  const double n = static_cast<double>(total);
  const std::size_t len = std::max(histogram.size(), probs.size());

  std::vector<double> expected;
  std::vector<double> observed;
  double e_acc = 0.0;
  double o_acc = 0.0;
  double e_used = 0.0;
  for (std::size_t m = 0; m < len; ++m) {
    const double p = m < probs.size() ? probs[m] : 0.0;
    e_acc += n * p;
    e_used += p;
    o_acc += m < histogram.size() ? static_cast<double>(histogram[m]) : 0.0;
    if (e_acc >= min_expected) {
      expected.push_back(e_acc);
      observed.push_back(o_acc);
      e_acc = 0.0;
      o_acc = 0.0;
    }
  }
  e_acc += n * std::max(0.0, 1.0 - e_used);
  if (expected.empty()) {
    expected.push_back(e_acc);
    observed.push_back(o_acc);
  } else {
    expected.back() += e_acc;
    observed.back() += o_acc;
  }

  ChiSquare out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.dof = static_cast<int>(expected.size()) - 1;
  if (out.dof < 1) return out;
  const boost::math::chi_squared law(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(law, out.statistic));
  return out;
}

WtEstimate mc_waiting_time(const PhotonDistribution& dist,
                           const IdealizedDetector& det, double rt_first,
                           double theta, std::uint64_t n_traj,
                           std::uint64_t seed, unsigned threads,
                           double bin_width) {
  check(det, rt_first);
  if (!(theta > 0.0)) throw InvalidArgument("averaging window theta must be > 0");
  if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be > 0");
  if (n_traj < 1) throw InvalidArgument("n_traj must be >= 1");
  const auto cdf = cumulative(dist);
  const double bin_lo = std::max(0.0, rt_first - 0.5 * bin_width);
  const double bin_hi = rt_first + 0.5 * bin_width;
  const double rt_end = bin_hi + theta;

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t accepted = 0;
    std::uint64_t in_bin = 0;
  };
  const std::uint64_t chunks = chunk_count(n_traj);
  std::vector<Partial> partial(chunks);
  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    Partial& acc = partial[c];
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t hi = std::min(n_traj, lo + kChunk);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const ClickRecord rec = simulate(cdf, det, rt_end, seed, i);
      for (std::size_t k = 0; k < rec.times.size(); ++k) {
        const double t = rec.times[k];
        if (t < bin_lo) continue;
        if (t > bin_hi) break;
        ++acc.in_bin;
        if (k + 1 == rec.times.size()) continue;
        const double delay = rec.times[k + 1] - t;
        if (delay > theta) continue;
        acc.sum += delay;
        acc.sum_sq += delay * delay;
        ++acc.accepted;
      }
    }
  });

  Partial total;
  for (const Partial& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.accepted += p.accepted;
    total.in_bin += p.in_bin;
  }
  if (total.accepted == 0) {
    throw InsufficientStatistics(
        "no click pair fell inside the first-click bin and the window");
  }
  WtEstimate est;
  est.accepted = total.accepted;
  est.in_bin = total.in_bin;
  const double count = static_cast<double>(total.accepted);
  est.mean_wt = total.sum / count;
  const double var =
      total.accepted > 1
          ? std::max(0.0, (total.sum_sq - count * est.mean_wt * est.mean_wt) /
                              (count - 1.0))
          : 0.0;
  est.standard_error = std::sqrt(var / count);
  return est;
}

}  // namespace cpm::oracle
