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

#include "cpm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <string>

#include "cpm/detail/special.hpp"
#include "cpm/error.hpp"

namespace cpm {
namespace {

constexpr double kMassSlack = 1e-10;

void check_entries(const std::vector<double>& probs) {
  if (probs.empty()) throw InvalidArgument("photon distribution is empty");
  for (std::size_t n = 0; n < probs.size(); ++n) {
    if (!(probs[n] >= 0.0) || !std::isfinite(probs[n])) {
      std::ostringstream os;
      os << "photon distribution entry " << n << " is negative or not finite";
      throw InvalidArgument(os.str());
    }
  }
}

// Largest truncation bound the automatic search will try.
constexpr std::size_t kMaxAutoBound = std::size_t{1} << 26;

// Mass beyond n_max, summed explicitly past the mode so that it does not
// suffer from the roundoff in 1 - sum(probs).
template <class LogPmf>
double tail_mass(LogPmf log_pmf, std::size_t n_max) {
  double tail = 0.0;
  double prev = std::exp(log_pmf(n_max));
  for (std::size_t n = n_max + 1;; ++n) {
    const double term = std::exp(log_pmf(n));
    tail += term;
    if (term <= prev && (term == 0.0 || term <= 1e-18 * tail)) break;
    prev = term;
  }
  return tail;
}

template <class LogPmf>
bool tail_ok(LogPmf log_pmf, const std::vector<double>& probs,
             double tail_tol) {
  const double last = probs.back() * static_cast<double>(probs.size() - 1);
  return last <= tail_tol && tail_mass(log_pmf, probs.size() - 1) <= tail_tol;
}

template <class LogPmf>
std::vector<double> tabulate(LogPmf log_pmf, std::size_t n_max) {
  std::vector<double> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) out[n] = std::exp(log_pmf(n));
  return out;
}

template <class LogPmf>
PhotonDistribution build_truncated(const char* family, double nbar,
                                   LogPmf log_pmf,
                                   std::optional<std::size_t> n_max,
                                   double tail_tol) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw InvalidArgument(std::string(family) + " state needs nbar >= 0");
  }
  if (nbar == 0.0) return make_number(0, n_max.value_or(0));

  std::size_t bound = n_max.value_or(default_n_max(nbar));
  for (;;) {
    auto probs = tabulate(log_pmf, bound);
    if (tail_ok(log_pmf, probs, tail_tol)) {
      return PhotonDistribution::from_probs(std::move(probs), tail_tol);
    }
    const std::size_t next = bound + std::max<std::size_t>(bound / 2, 16);
    if (next > kMaxAutoBound) {
      std::ostringstream os;
      os << family << " state with nbar=" << nbar
         << " cannot meet tail_tol=" << tail_tol;
      throw InvalidArgument(os.str());
    }
    if (n_max) {
      // Report the smallest sufficient bound to the caller.
      std::size_t need = next;
      while (!tail_ok(log_pmf, tabulate(log_pmf, need), tail_tol)) {
        need += std::max<std::size_t>(need / 2, 16);
      }
      std::size_t lo = bound;
      while (lo + 1 < need) {
        const std::size_t mid = lo + (need - lo) / 2;
        if (tail_ok(log_pmf, tabulate(log_pmf, mid), tail_tol)) {
          need = mid;
        } else {
          lo = mid;
        }
      }
      std::ostringstream os;
      os << family << " state with nbar=" << nbar << " needs n_max >= "
         << need << " for tail_tol=" << tail_tol << " (got " << bound << ")";
      throw TruncationError(os.str(), need);
    }
    bound = next;
  }
}

}  // namespace

PhotonDistribution PhotonDistribution::from_probs(std::vector<double> probs,
                                                  double tail_tol) {
  check_entries(probs);
  const double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (mass > 1.0 + kMassSlack || 1.0 - mass > tail_tol + kMassSlack) {
    std::ostringstream os;
    os << "photon distribution mass " << mass << " is outside [1 - "
       << tail_tol << ", 1]";
    throw InvalidArgument(os.str());
  }
  return PhotonDistribution(std::move(probs), tail_tol);
}

PhotonDistribution PhotonDistribution::unnormalized(std::vector<double> probs,
                                                    double tail_tol) {
  check_entries(probs);
  return PhotonDistribution(std::move(probs), tail_tol);
}

double PhotonDistribution::total() const noexcept {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double PhotonDistribution::mean() const noexcept {
  double s = 0.0;
  for (std::size_t n = 1; n < probs_.size(); ++n) {
    s += static_cast<double>(n) * probs_[n];
  }
  return s;
}

PhotonDistribution PhotonDistribution::resized(std::size_t n_max) const {
  std::vector<double> out(n_max + 1, 0.0);
  std::copy_n(probs_.begin(), std::min(probs_.size(), out.size()),
              out.begin());
  return PhotonDistribution(std::move(out), tail_tol_);
}

const char* to_string(StateFamily family) noexcept {
  switch (family) {
    case StateFamily::kCoherent:
      return "coherent";
    case StateFamily::kNumber:
      return "number";
    case StateFamily::kThermal:
      return "thermal";
  }
  return "unknown";
}

StateFamily parse_state_family(const char* name) {
  if (std::strcmp(name, "coherent") == 0) return StateFamily::kCoherent;
  if (std::strcmp(name, "number") == 0) return StateFamily::kNumber;
  if (std::strcmp(name, "thermal") == 0) return StateFamily::kThermal;
  throw InvalidArgument(std::string("unknown state family '") + name +
                        "' (expected coherent, number or thermal)");
}

std::size_t default_n_max(double nbar) noexcept {
  return static_cast<std::size_t>(
      std::ceil(nbar + 10.0 * std::sqrt(std::max(nbar, 0.0)) + 20.0));
}

PhotonDistribution make_number(std::size_t n, std::size_t n_max) {
  if (n > n_max) {
    std::ostringstream os;
    os << "number state n=" << n << " exceeds n_max=" << n_max;
    throw InvalidArgument(os.str());
  }
  std::vector<double> probs(n_max + 1, 0.0);
  probs[n] = 1.0;
  return PhotonDistribution::from_probs(std::move(probs));
}

PhotonDistribution make_coherent(double nbar, std::optional<std::size_t> n_max,
                                 double tail_tol) {
  return build_truncated(
      "coherent", nbar,
      [nbar](std::size_t n) { return detail::log_poisson_pmf(n, nbar); },
      n_max, tail_tol);
}

PhotonDistribution make_thermal(double nbar, std::optional<std::size_t> n_max,
                                double tail_tol) {
  const double log_ratio = std::log(nbar) - std::log1p(nbar);
  const double log_p0 = -std::log1p(nbar);
  return build_truncated(
      "thermal", nbar,
      [=](std::size_t n) {
        return log_p0 + static_cast<double>(n) * log_ratio;
      },
      n_max, tail_tol);
}

PhotonDistribution make_state(StateFamily family, double nbar,
                              std::optional<std::size_t> n_max,
                              double tail_tol) {
  switch (family) {
    case StateFamily::kCoherent:
      return make_coherent(nbar, n_max, tail_tol);
    case StateFamily::kThermal:
      return make_thermal(nbar, n_max, tail_tol);
    case StateFamily::kNumber: {
      if (!(nbar >= 0.0)) throw InvalidArgument("number state needs nbar >= 0");
      const auto n = static_cast<std::size_t>(std::llround(nbar));
      return make_number(n, n_max.value_or(n));
    }
  }
  throw InvalidArgument("unknown state family");
}

double factorial_moment(const PhotonDistribution& dist, int k) {
  if (k < 0) throw InvalidArgument("factorial moment order must be >= 0");
  const auto probs = dist.probs();
  const auto order = static_cast<std::size_t>(k);
  double s = 0.0;
  for (std::size_t n = order; n < probs.size(); ++n) {
    if (probs[n] != 0.0) s += detail::falling_factorial(n, order) * probs[n];
  }
  return s;
}

double mandel_q(const PhotonDistribution& dist) {
  const double mass = factorial_moment(dist, 0);
  const double f1 = factorial_moment(dist, 1) / mass;
  if (!(f1 > 0.0)) {
    throw UndefinedStatistic("Mandel Q is undefined for a zero-mean state");
  }
  const double f2 = factorial_moment(dist, 2) / mass;
  return (f2 - f1 * f1) / f1;
}

}  // namespace cpm
