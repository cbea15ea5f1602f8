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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpm/detector.hpp"
#include "cpm/fock.hpp"

// Independent verification engines: exact propagation of the classical
// (n, m) jump process equivalent to the diagonal detector dynamics, and
// seeded trajectory sampling of the same process.
namespace cpm::oracle {

struct JointState {
  std::size_t n_max = 0;
  std::size_t m_max = 0;
  std::vector<double> p;  // row-major, p[n * (m_max + 1) + m]
  double leaked = 0.0;    // mass pushed past m_max

  double at(std::size_t n, std::size_t m) const {
    return p[n * (m_max + 1) + m];
  }
  double total() const;
  std::vector<double> count_marginal() const;
};

// Uniformization of the full (n, m) chain. Throws TruncationError (with a
// suggested bound) when more than 1e-10 of the mass passes m_max.
JointState markov_joint(const PhotonDistribution& dist,
                        const IdealizedDetector& det, double rt,
                        std::size_t m_max);

// SD only: each photon runs its own present / registered / lost chain, the
// n-photon law is the n-fold convolution, mixed over rho and convolved
// with the dark-count chain. Same process as markov_joint.
std::vector<double> markov_counts_product(const PhotonDistribution& dist,
                                          const IdealizedDetector& det,
                                          double rt, std::size_t m_max);

// p(0..m_max). Uses the joint chain unless that is too large (SD only).
std::vector<double> markov_counts(const PhotonDistribution& dist,
                                  const IdealizedDetector& det, double rt,
                                  std::size_t m_max);

enum class ClickKind { kBright, kDark };

struct ClickRecord {
  std::vector<double> times;  // R t, ascending
  std::vector<ClickKind> kinds;
  std::uint64_t seed = 0;
  std::uint64_t trajectory = 0;
};

// One trajectory on [0, rt_end], addressed by (seed, index).
ClickRecord simulate_trajectory(const PhotonDistribution& dist,
                                const IdealizedDetector& det, double rt_end,
                                std::uint64_t seed, std::uint64_t index);

struct McCounts {
  std::vector<std::uint64_t> histogram;  // counts registered in (0, rt)
  std::uint64_t n_traj = 0;
  std::vector<ClickRecord> sample;       // trajectories 0..sample_size-1

  double mean() const;
  double variance() const;
  double standard_error() const;  // of the mean
};

McCounts mc_trajectories(const PhotonDistribution& dist,
                         const IdealizedDetector& det, double rt,
                         std::uint64_t n_traj, std::uint64_t seed,
                         unsigned threads = 1, std::size_t sample_size = 8);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson test of an MC histogram against exact probabilities p(0..). Bins
// are pooled left to right until each expects >= min_expected events; the
// mass beyond p's support joins the last bin.
ChiSquare chi_square_test(const std::vector<std::uint64_t>& histogram,
                          const std::vector<double>& probs,
                          double min_expected = 5.0);

inline constexpr double kWtBinWidth = 0.05;

struct WtEstimate {
  double mean_wt = 0.0;
  double standard_error = 0.0;
  std::uint64_t accepted = 0;  // delays <= theta
  std::uint64_t in_bin = 0;    // clicks inside the first-click bin
};

// Delay from every click inside [rt_first - w/2, rt_first + w/2] (clipped
// at 0) to the next click; delays above theta are discarded. Throws
// InsufficientStatistics when nothing is accepted.
WtEstimate mc_waiting_time(const PhotonDistribution& dist,
                           const IdealizedDetector& det, double rt_first,
                           double theta, std::uint64_t n_traj,
                           std::uint64_t seed, unsigned threads = 1,
                           double bin_width = kWtBinWidth);

}  // namespace cpm::oracle
