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
#include <functional>
#include <string>
#include <vector>

#include "cpm/fock.hpp"

// Idealized photodetector models acting on diagonal field states. Times are
// dimensionless (R t); the rate constant R only sets the time unit.
namespace cpm {

enum class Variant { kSD, kE };

const char* to_string(Variant variant) noexcept;
Variant parse_variant(const std::string& name);

struct IdealizedDetector {
  Variant variant = Variant::kSD;
  double r = 1.0;    // counting-rate constant R in Hz
  double eta = 0.6;  // quantum efficiency
  double d = 5e-3;   // dark-count rate in units of R

  double v() const noexcept { return 1.0 - eta; }
  void validate() const;
};

struct CountStats {
  double rt = 0.0;
  double mbar = 0.0;
  double m2fac = 0.0;  // mean of m(m-1)
  double k_t = 0.0;    // m2fac / mbar^2
};

// Fills k_t; throws UndefinedStatistic when mbar == 0.
CountStats finish_count_stats(double rt, double mbar, double m2fac);

struct WaitingTimeCurve {
  double t = 0.0;             // first-click time R t
  std::vector<double> taus;   // delays R tau
  std::vector<double> w;      // W_t(tau) in units of R^2
  double theta = 0.0;         // averaging window R theta
  double norm = 0.0;          // int_0^theta W
  double mean_wt = 0.0;       // int_0^theta tau W / norm; NaN when norm == 0
};

// Default averaging window 10 / eta (R units).
double default_theta(const IdealizedDetector& det);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

struct WindowIntegrals {
  double norm = 0.0;
  double first = 0.0;  // int tau W
  double error = 0.0;  // relative error estimate
};

// int_0^theta W and int_0^theta tau W by adaptive Gauss-Kronrod.
WindowIntegrals integrate_window(const std::function<double(double)>& w,
                                 double theta, double rel_tol = 1e-10);

// Same integrals by a fixed composite trapezoid rule.
WindowIntegrals trapezoid_window(const std::function<double(double)>& w,
                                 double theta, int intervals);

// Samples w on tau_grid and fills norm / mean_wt from integrate_window.
WaitingTimeCurve make_wt_curve(double rt_first,
                               const std::function<double(double)>& w,
                               std::vector<double> tau_grid, double theta);

// Smallest R t at which an increasing function reaches `target`.
double solve_increasing(const std::function<double(double)>& f, double target,
                        double hi_guess);

// Count bound past which the law of m carries negligible mass.
std::size_t suggest_m_max(const PhotonDistribution& dist,
                          const IdealizedDetector& det, double rt);

}  // namespace cpm
