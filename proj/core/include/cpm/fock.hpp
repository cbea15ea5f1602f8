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
#include <optional>
#include <span>
#include <vector>

namespace cpm {

inline constexpr double kDefaultTailTol = 1e-12;

// Diagonal Fock-basis populations rho_n = <n|rho|n>, n = 0..n_max.
//
// Normalized states (from the make_* constructors or from_probs) carry
// total mass in [1 - tail_tol, 1]. Intermediate results of the
// superoperator algebra (no-count states, shifted states) are built with
// unnormalized() and only need non-negative entries.
class PhotonDistribution {
 public:
  static PhotonDistribution from_probs(std::vector<double> probs,
                                       double tail_tol = kDefaultTailTol);
  static PhotonDistribution unnormalized(std::vector<double> probs,
                                         double tail_tol = kDefaultTailTol);

  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t n) const noexcept {
    return n < probs_.size() ? probs_[n] : 0.0;
  }
  std::size_t size() const noexcept { return probs_.size(); }
  std::size_t n_max() const noexcept { return probs_.size() - 1; }
  double tail_tol() const noexcept { return tail_tol_; }

  double total() const noexcept;
  double mean() const noexcept;

  // Copy padded with zeros (or cut) to a new truncation bound.
  PhotonDistribution resized(std::size_t n_max) const;

 private:
  PhotonDistribution(std::vector<double> probs, double tail_tol)
      : probs_(std::move(probs)), tail_tol_(tail_tol) {}

  std::vector<double> probs_;
  double tail_tol_;
};

enum class StateFamily { kCoherent, kNumber, kThermal };

const char* to_string(StateFamily family) noexcept;
StateFamily parse_state_family(const char* name);

// Default truncation for coherent/thermal states before the tail check.
std::size_t default_n_max(double nbar) noexcept;

PhotonDistribution make_number(std::size_t n, std::size_t n_max);

// With n_max unset the default rule is applied and grown geometrically
// until the tail tolerance holds. An explicit n_max that is too small
// raises TruncationError carrying the bound that would suffice.
PhotonDistribution make_coherent(double nbar,
                                 std::optional<std::size_t> n_max = {},
                                 double tail_tol = kDefaultTailTol);
PhotonDistribution make_thermal(double nbar,
                                std::optional<std::size_t> n_max = {},
                                double tail_tol = kDefaultTailTol);

// Number states take round(nbar).
PhotonDistribution make_state(StateFamily family, double nbar,
                              std::optional<std::size_t> n_max = {},
                              double tail_tol = kDefaultTailTol);

// sum_n n!/(n-k)! rho_n; k = 0 gives the total mass.
double factorial_moment(const PhotonDistribution& dist, int k);

// (<n^2> - <n>^2)/<n> - 1. Throws UndefinedStatistic for zero mean.
double mandel_q(const PhotonDistribution& dist);

}  // namespace cpm
