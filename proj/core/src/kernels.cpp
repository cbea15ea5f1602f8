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

#include "cpm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpm/detail/special.hpp"
#include "cpm/error.hpp"

namespace cpm::kernels {
namespace {

std::size_t order_of(int k) {
  if (k < 0) throw InvalidArgument("shift order must be >= 0");
  return static_cast<std::size_t>(k);
}

void check_weight(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument("series weight v must lie in [0, 1]");
  }
}

}  // namespace

PhotonDistribution apply_a_power(const PhotonDistribution& dist, int k) {
  const std::size_t order = order_of(k);
  const auto in = dist.probs();
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t n = 0; n + order < in.size(); ++n) {
    const double rho = in[n + order];
    if (rho == 0.0) continue;
    // Exact integer weights for the low orders.
    out[n] = order == 0   ? rho
             : order == 1 ? static_cast<double>(n + 1) * rho
                          : std::exp(detail::log_factorial(n + order) -
                                     detail::log_factorial(n)) *
                                rho;
  }
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

PhotonDistribution apply_a_power_scaled(const PhotonDistribution& dist, int k,
                                        double x) {
  const std::size_t order = order_of(k);
  if (!(x >= 0.0)) throw InvalidArgument("A-shift scale must be >= 0");
  const auto in = dist.probs();
  std::vector<double> out(in.size(), 0.0);
  if (order == 0) {
    std::copy(in.begin(), in.end(), out.begin());
  } else if (x > 0.0) {
    const double log_xk = static_cast<double>(order) * std::log(x);
    for (std::size_t n = 0; n + order < in.size(); ++n) {
      const double rho = in[n + order];
      if (rho == 0.0) continue;
      out[n] = std::exp(detail::log_binomial(n + order, order) + log_xk +
                        std::log(rho));
    }
  }
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

PhotonDistribution apply_eps_power(const PhotonDistribution& dist, int k) {
  const std::size_t order = order_of(k);
  const auto in = dist.probs();
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t n = 0; n + order < in.size(); ++n) out[n] = in[n + order];
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

PhotonDistribution eps_resolvent_series(const PhotonDistribution& dist,
                                        double v, int k0) {
  const std::size_t order = order_of(k0);
  check_weight(v);
  const auto in = dist.probs();
  std::vector<double> out(in.size(), 0.0);
  // out[n] = rho_{n+k0} + v out[n+1]
  double acc = 0.0;
  for (std::size_t i = in.size(); i-- > 0;) {
    const double shifted = i + order < in.size() ? in[i + order] : 0.0;
    acc = shifted + v * acc;
    out[i] = acc;
  }
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

PhotonDistribution e_semigroup(const PhotonDistribution& dist, double rt,
                               double v) {
  if (!(rt >= 0.0)) throw InvalidArgument("e_semigroup needs rt >= 0");
  check_weight(v);
  const auto in = dist.probs();
  const std::size_t size = in.size();
  std::vector<double> out(size, 0.0);
  if (rt == 0.0) {
    std::copy(in.begin(), in.end(), out.begin());
    return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
  }

  // Weights e^{-rt} (v rt)^j / j!, restricted to where they matter.
  const double lambda = v * rt;
  const auto window = detail::poisson_window(lambda);
  const std::size_t j_hi = std::min(window.hi, size - 1);
  std::vector<double> weight;
  if (window.lo <= j_hi) {
    weight.resize(j_hi - window.lo + 1);
    for (std::size_t j = window.lo; j <= j_hi; ++j) {
      weight[j - window.lo] =
          lambda > 0.0
              ? std::exp(-rt + static_cast<double>(j) * std::log(lambda) -
                         detail::log_factorial(j))
              : (j == 0 ? std::exp(-rt) : 0.0);
    }
  }
  for (std::size_t n = 0; n < size; ++n) {
    double s = 0.0;
    for (std::size_t j = window.lo; j <= j_hi && n + j < size; ++j) {
      s += weight[j - window.lo] * in[n + j];
    }
    out[n] = s;
  }
  return PhotonDistribution::unnormalized(std::move(out), dist.tail_tol());
}

double eps_trace(const PhotonDistribution& dist, int k) {
  const std::size_t order = order_of(k);
  const auto in = dist.probs();
  double s = 0.0;
  for (std::size_t n = order; n < in.size(); ++n) s += in[n];
  return s;
}

}  // namespace cpm::kernels
