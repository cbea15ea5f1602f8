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
#include <numeric>
#include <vector>

#include "cpm/emodel.hpp"
#include "cpm/error.hpp"
#include "cpm/fock.hpp"
#include "cpm/kernels.hpp"
#include "support/compose.hpp"

using namespace cpm;

namespace {

IdealizedDetector e_det(double eta = 0.6, double d = 5e-3) {
  IdealizedDetector det;
  det.variant = Variant::kE;
  det.eta = eta;
  det.d = d;
  return det;
}

}  // namespace

TEST_SUITE("emodel") {

TEST_CASE("no-count evolution") {
  const auto rho = make_thermal(5.0);
  const auto same = e::nocount(rho, e_det(), 0.0);
  for (std::size_t n = 0; n <= rho.n_max(); ++n) {
    CHECK(same[n] == doctest::Approx(rho[n]).epsilon(1e-15));
  }
  for (double rt : {0.5, 3.0, 40.0}) {
    CHECK(e::nocount_trace(make_number(0, 0), e_det(0.6, 0.0), rt) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto one = e::nocount(make_number(1, 1), e_det(1.0, 0.0), 1.0);
  CHECK(one[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(one[0]) < 1e-16);
  CHECK(one.total() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  IdealizedDetector sd = e_det();
  sd.variant = Variant::kSD;
  CHECK_THROWS_AS(e::nocount(rho, sd, 1.0), InvalidArgument);
}

TEST_CASE("count law edge cases") {
  CHECK(e::count_prob(make_number(0, 0), e_det(0.6, 0.0), 4.0, 0) == 1.0);
  CHECK(e::count_prob(make_number(1, 1), e_det(1.0, 0.0), 60.0, 1) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const auto p = e::count_distribution(make_number(5, 5), e_det(0.6, 0.0),
                                       80.0, 8);
  for (std::size_t m = 0; m <= 8; ++m) {
    const double expect = m <= 5 ? testing::binomial(5, m, 0.6) : 0.0;
    CHECK(p[m] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("count law is complete and consistent with the moments") {
  for (auto family : {StateFamily::kCoherent, StateFamily::kNumber,
                      StateFamily::kThermal}) {
    const auto rho = make_state(family, 50.0);
    for (double rt : {0.5, 1.0, 5.0, 20.0, 80.0}) {
      const auto det = e_det();
      const auto p = e::count_distribution(rho, det, rt,
                                           suggest_m_max(rho, det, rt));
      double total = 0.0, m1 = 0.0, m2 = 0.0;
      for (std::size_t m = 0; m < p.size(); ++m) {
        CHECK(p[m] >= -1e-15);
        total += p[m];
        m1 += static_cast<double>(m) * p[m];
        m2 += static_cast<double>(m) * (m - 1.0) * p[m];
      }
      CHECK(std::abs(total - 1.0) < 1e-8);
      const auto s = e::moments(rho, det, rt);
      CHECK(m1 == doctest::Approx(s.mbar).epsilon(1e-8));
      CHECK(m2 == doctest::Approx(s.m2fac).epsilon(1e-8));
    }
  }
}

TEST_CASE("single-term counts agree with the distribution") {
  const auto rho = make_coherent(7.0);
  const auto det = e_det();
  const auto p = e::count_distribution(rho, det, 2.5, 30);
  for (int m : {0, 1, 2, 6}) {
    CHECK(e::count_prob(rho, det, 2.5, m) ==
          doctest::Approx(p[m]).epsilon(1e-12));
  }
}

TEST_CASE("kernels") {
  const auto rho = make_coherent(9.0);
  const auto k0 = e::kernels(rho, 0.0);
  CHECK(k0.xi1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k0.omega == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k0.p0_surv == doctest::Approx(rho.total()).epsilon(1e-15));

  CHECK(e::kernels(make_number(2, 2), 1.0).xi1 ==
        doctest::Approx(1.5 / std::exp(1.0)).epsilon(1e-14));
  CHECK(e::kernels(make_number(4, 4), 200.0).xi1 < 1e-60);

  double prev = 1.0;
  for (double rt = 0.25; rt < 30.0; rt += 0.25) {
    const double xi = e::kernels(rho, rt).xi1;
    CHECK(xi <= prev);
    prev = xi;
  }
  CHECK(std::isnan(e::kernels(make_number(1, 1), 1.0).omega));
  CHECK_THROWS_AS(e::kernels(make_number(0, 0), 1.0), UndefinedStatistic);
}

TEST_CASE("stable moments match the kernel expressions") {
  for (auto rho : {make_coherent(20.0), make_thermal(8.0),
                   make_number(30, 30)}) {
    const double nbar = factorial_moment(rho, 1);
    const double f2 = factorial_moment(rho, 2);
    for (double rt : {0.7, 4.0, 25.0}) {
      const auto k = e::kernels(rho, rt);
      const auto a = e::absorption_moments(rho, rt);
      CHECK(a.first ==
            doctest::Approx(nbar * (1.0 - k.xi1)).epsilon(1e-10));
      CHECK(a.second ==
            doctest::Approx(f2 * (1.0 - k.omega) - 2.0 * nbar * rt * k.xi2)
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("moment limits") {
  const auto rho = make_coherent(12.0);
  CHECK_THROWS_AS(e::moments(rho, e_det(0.6, 0.0), 0.0), UndefinedStatistic);
  CHECK(e::moments(rho, e_det(0.6, 0.0), 400.0).mbar ==
        doctest::Approx(0.6 * 12.0).epsilon(1e-12));

  for (auto s : {make_coherent(3.0), make_thermal(2.0), make_number(6, 6)}) {
    const double expect = (1.0 - s[0] - s[1]) / ((1.0 - s[0]) * (1.0 - s[0]));
    CHECK(e::moments(s, e_det(0.6, 0.0), 1e-12).k_t ==
          doctest::Approx(expect).epsilon(1e-9));
  }
  CHECK(e::moments(make_number(6, 6), e_det(0.6, 0.0), 1e-12).k_t ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("waiting-time density equals the operator composition") {
  const auto det = e_det();
  const auto ute = e_det(0.0, 0.0);
  for (auto rho : {make_coherent(12.0), make_number(5, 5)}) {
    for (double t : {0.0, 0.4, 3.0, 9.0}) {
      const auto first =
          testing::e_jump(e::nocount(rho, ute, t), det.eta, det.d);
      for (double tau : {0.0, 0.3, 1.7, 9.0}) {
        const double brute =
            testing::e_jump(e::nocount(first, det, tau), det.eta, det.d)
                .total();
        CHECK(e::wt_density(rho, det, t, tau) ==
              doctest::Approx(brute).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("waiting-time degenerate cases") {
  const auto det = e_det(0.6, 0.0);
  CHECK(e::wt_density(make_number(0, 0), det, 1.0, 0.5) == 0.0);
  CHECK(e::wt_density(make_number(1, 1), det, 1.0, 0.5) == 0.0);
}

TEST_CASE("photon-exhausted tail is a dark exponential") {
  const auto det = e_det();
  const auto rho = make_number(3, 3);
  const double t = 200.0;
  const double w0 = e::wt_density(rho, det, t, 0.0);
  for (double tau : {10.0, 300.0}) {
    CHECK(e::wt_density(rho, det, t, tau) ==
          doctest::Approx(w0 * std::exp(-det.d * tau)).epsilon(1e-10));
  }
  CHECK(w0 == doctest::Approx(det.d * det.d).epsilon(1e-10));
}

TEST_CASE("mean waiting time is flat while photons remain") {
  const auto det = e_det();
  const auto rho = make_number(100, 100);
  const double theta = default_theta(det);
  const double base = e::mean_wt(rho, det, 0.0, theta);
  for (double rt : {20.0, 50.0, 80.0}) {
    CHECK(std::abs(e::mean_wt(rho, det, rt, theta) / base - 1.0) < 0.1);
  }
  CHECK(e::mean_wt(rho, det, 150.0, theta) > 1.5 * base);
}

TEST_CASE("cavity photon number") {
  CHECK(e::ncav(make_coherent(100.0), 0.0) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK(e::ncav(make_number(1, 1), 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  const auto th = make_thermal(100.0);
  const double nth = e::ncav(th, 50.0);
  CHECK(nth == doctest::Approx(100.0 * e::kernels(th, 50.0).xi1)
                   .epsilon(1e-10));
  CHECK(std::abs(nth - e::ncav(make_number(100, 100), 50.0)) > 1.0);
}

TEST_CASE("counting time grows with the photon number") {
  const auto det = e_det(0.6, 0.0);
  const double t50 = e::counting_time(make_number(50, 50), det);
  const double t100 = e::counting_time(make_number(100, 100), det);
  const double t200 = e::counting_time(make_number(200, 200), det);
  CHECK(t100 > t50);
  CHECK((t200 - t100) / (t100 - t50) == doctest::Approx(2.0).epsilon(0.05));
}

}  // TEST_SUITE
