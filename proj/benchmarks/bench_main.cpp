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

#include <benchmark/benchmark.h>

#include <cstdint>

#include "cpm/detector.hpp"
#include "cpm/emodel.hpp"
#include "cpm/fock.hpp"
#include "cpm/microdetector.hpp"
#include "cpm/oracle.hpp"
#include "cpm/sdmodel.hpp"

using namespace cpm;

namespace {

IdealizedDetector make_det(Variant v) {
  IdealizedDetector det;
  det.variant = v;
  return det;
}

void BM_BrightCoeff(benchmark::State& state) {
  const micro::DetectorParams p;
  const micro::FieldMode m;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    micro::clear_coefficient_cache();
    benchmark::DoNotOptimize(micro::bright_coeff(p, m, n));
  }
}
BENCHMARK(BM_BrightCoeff)->Arg(1)->Arg(50);

void BM_DarkCoeff(benchmark::State& state) {
  const micro::DetectorParams p;
  const micro::FieldMode m;
  for (auto _ : state) {
    micro::clear_coefficient_cache();
    benchmark::DoNotOptimize(micro::dark_coeff(p, m, 10));
  }
}
BENCHMARK(BM_DarkCoeff);

void BM_EmissionCoeff(benchmark::State& state) {
  const micro::DetectorParams p;
  const micro::FieldMode m;
  for (auto _ : state) {
    micro::clear_coefficient_cache();
    benchmark::DoNotOptimize(micro::emission_coeff(p, m, 10));
  }
}
BENCHMARK(BM_EmissionCoeff);

void BM_SdCountDistribution(benchmark::State& state) {
  const auto rho = make_thermal(static_cast<double>(state.range(0)));
  const auto det = make_det(Variant::kSD);
  const std::size_t m_max = suggest_m_max(rho, det, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::count_distribution(rho, det, 5.0, m_max));
  }
}
BENCHMARK(BM_SdCountDistribution)->Arg(50)->Arg(100);

void BM_ECountDistribution(benchmark::State& state) {
  const auto rho = make_thermal(static_cast<double>(state.range(0)));
  const auto det = make_det(Variant::kE);
  const std::size_t m_max = suggest_m_max(rho, det, 20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e::count_distribution(rho, det, 20.0, m_max));
  }
}
BENCHMARK(BM_ECountDistribution)->Arg(50)->Arg(100);

void BM_SdMeanWt(benchmark::State& state) {
  const auto rho = make_number(100, 100);
  const auto det = make_det(Variant::kSD);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::mean_wt(rho, det, 2.0, default_theta(det)));
  }
}
BENCHMARK(BM_SdMeanWt);

void BM_EMeanWt(benchmark::State& state) {
  const auto rho = make_number(100, 100);
  const auto det = make_det(Variant::kE);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e::mean_wt(rho, det, 50.0, default_theta(det)));
  }
}
BENCHMARK(BM_EMeanWt);

void BM_MarkovCounts(benchmark::State& state) {
  const auto rho = make_coherent(50.0);
  const auto det = make_det(state.range(0) == 0 ? Variant::kSD : Variant::kE);
  const std::size_t m_max = suggest_m_max(rho, det, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::markov_counts(rho, det, 5.0, m_max));
  }
}
BENCHMARK(BM_MarkovCounts)->Arg(0)->Arg(1);

void BM_MonteCarlo(benchmark::State& state) {
  const auto rho = make_coherent(50.0);
  const auto det = make_det(Variant::kSD);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle::mc_trajectories(rho, det, 1.0, 10000, seed++));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_MonteCarlo);

}  // namespace

BENCHMARK_MAIN();
