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

#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "cpm/error.hpp"
#include "cpm/fock.hpp"
#include "cpm/kernels.hpp"

using namespace cpm;

namespace {

PhotonDistribution sample_state() {
  return make_coherent(6.0, 60);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("A shift weights are falling factorials") {
  const auto rho = sample_state();
  for (int k : {0, 1, 2, 5}) {
    const auto out = kernels::apply_a_power(rho, k);
    for (std::size_t n = 0; n + k <= rho.n_max(); ++n) {
      double w = 1.0;
      for (int i = 1; i <= k; ++i) w *= static_cast<double>(n + i);
      CHECK(out[n] == doctest::Approx(w * rho[n + k]).epsilon(1e-13));
    }
    // Tr A^k rho is the k-th factorial moment.
    CHECK(out.total() ==
          doctest::Approx(factorial_moment(rho, k)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(kernels::apply_a_power(rho, -1), InvalidArgument);
}

TEST_CASE("scaled A shift is x^k A^k / k!") {
  const auto rho = sample_state();
  const double x = 0.37;
  for (int k : {1, 3, 4}) {
    const auto scaled = kernels::apply_a_power_scaled(rho, k, x);
    const auto plain = kernels::apply_a_power(rho, k);
    const double c = std::pow(x, k) / std::tgamma(k + 1.0);
    for (std::size_t n = 0; n <= rho.n_max(); ++n) {
      CHECK(scaled[n] == doctest::Approx(c * plain[n]).epsilon(1e-12));
    }
  }
}

TEST_CASE("eps shift and trace") {
  const auto rho = sample_state();
  const auto shifted = kernels::apply_eps_power(rho, 3);
  CHECK(shifted[0] == rho[3]);
  CHECK(shifted.n_max() == rho.n_max());
  double tail = 0.0;
  for (std::size_t n = 3; n <= rho.n_max(); ++n) tail += rho[n];
  CHECK(kernels::eps_trace(rho, 3) == doctest::Approx(tail).epsilon(1e-15));
  CHECK(shifted.total() == doctest::Approx(tail).epsilon(1e-15));
}

TEST_CASE("resolvent inverts 1 - v eps") {
  const auto rho = sample_state();
  for (double v : {0.0, 0.4, 1.0}) {
    for (int k0 : {0, 1, 2}) {
      const auto u = kernels::eps_resolvent_series(rho, v, k0);
      for (std::size_t n = 0; n <= rho.n_max(); ++n) {
        const double back = u[n] - v * u[n + 1];
        CHECK(back == doctest::Approx(rho[n + k0]).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(kernels::eps_resolvent_series(rho, 1.5, 0), InvalidArgument);
}

TEST_CASE("E semigroup composes") {
  const auto rho = sample_state();
  const double v = 0.4;
  const auto ab = kernels::e_semigroup(kernels::e_semigroup(rho, 0.7, v), 1.3,
                                       v);
  const auto direct = kernels::e_semigroup(rho, 2.0, v);
  for (std::size_t n = 0; n <= rho.n_max(); ++n) {
    CHECK(ab[n] == doctest::Approx(direct[n]).epsilon(1e-12));
  }
  const auto same = kernels::e_semigroup(rho, 0.0, v);
  for (std::size_t n = 0; n <= rho.n_max(); ++n) CHECK(same[n] == rho[n]);
}

TEST_CASE("P^0 survival of a number state is a Poisson CDF") {
  for (std::size_t n : {0u, 1u, 5u, 20u}) {
    const auto rho = make_number(n, n);
    for (double t : {0.1, 2.0, 15.0}) {
      const double surv = kernels::e_semigroup(rho, t, 1.0).total();
      const double expect = boost::math::gamma_q(static_cast<double>(n) + 1.0, t);
      CHECK(surv == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

}  // TEST_SUITE
