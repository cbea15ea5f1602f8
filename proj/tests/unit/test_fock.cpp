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

#include "cpm/error.hpp"
#include "cpm/fock.hpp"

using namespace cpm;

TEST_SUITE("fock") {

TEST_CASE("number state is a single spike") {
  const auto s = make_number(7, 12);
  CHECK(s.n_max() == 12);
  CHECK(s[7] == 1.0);
  CHECK(s.total() == 1.0);
  CHECK(s.mean() == doctest::Approx(7.0));
  CHECK(mandel_q(s) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(make_number(13, 12), InvalidArgument);
}

TEST_CASE("coherent and thermal statistics") {
  for (double nbar : {0.5, 5.0, 50.0, 100.0}) {
    const auto c = make_coherent(nbar);
    CHECK(std::abs(c.total() - 1.0) <= c.tail_tol());
    CHECK(factorial_moment(c, 1) == doctest::Approx(nbar).epsilon(1e-10));
    CHECK(std::abs(mandel_q(c)) < 1e-8);

    const auto t = make_thermal(nbar);
    CHECK(factorial_moment(t, 1) == doctest::Approx(nbar).epsilon(1e-8));
    CHECK(mandel_q(t) == doctest::Approx(nbar).epsilon(1e-6));
  }
}

TEST_CASE("explicit truncation reports the bound it needs") {
  try {
    make_coherent(50.0, 60);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.required() > 60);
    const auto ok = make_coherent(50.0, e.required());
    CHECK(1.0 - ok.total() <= ok.tail_tol());
    CHECK_THROWS_AS(make_coherent(50.0, e.required() - 1), TruncationError);
  }
}

TEST_CASE("tolerances near roundoff are reachable") {
  for (double nbar : {10.0, 50.0, 100.0}) {
    const auto t = make_thermal(nbar, {}, 1e-15);
    CHECK(factorial_moment(t, 2) / (nbar * nbar) ==
          doctest::Approx(2.0).epsilon(1e-13));
    const auto c = make_coherent(nbar, {}, 1e-16);
    CHECK(c.n_max() >= make_coherent(nbar).n_max());
  }
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(PhotonDistribution::from_probs({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(PhotonDistribution::from_probs({1.2, -0.2}),
                  InvalidArgument);
  CHECK_THROWS_AS(PhotonDistribution::from_probs({0.5, 0.3}), InvalidArgument);
  CHECK_NOTHROW(PhotonDistribution::from_probs({0.5, 0.5}));
  CHECK_THROWS_AS(make_coherent(-1.0), InvalidArgument);
}

TEST_CASE("zero-mean state has no Mandel Q") {
  CHECK_THROWS_AS(mandel_q(make_number(0, 3)), UndefinedStatistic);
}

TEST_CASE("resizing pads with zeros") {
  const auto s = make_number(2, 3).resized(6);
  CHECK(s.size() == 7);
  CHECK(s[2] == 1.0);
  CHECK(s[6] == 0.0);
  CHECK(s[100] == 0.0);
}

TEST_CASE("state family names round-trip") {
  for (auto f : {StateFamily::kCoherent, StateFamily::kNumber,
                 StateFamily::kThermal}) {
    CHECK(parse_state_family(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_state_family("squeezed"), InvalidArgument);
  CHECK(make_state(StateFamily::kNumber, 4.4)[4] == 1.0);
}

}  // TEST_SUITE
