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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cpm/exp_integral.hpp"

// Microscopic two-level photodetector: a Jaynes-Cummings sensor coupled to
// a thermal amplification reservoir. Computes the time-averaged jump
// coefficients of the detector's back-action on a single field mode,
//
//   J rho = sum_n rho_nn [ n J_n^B |n-1><n-1| + J_n^D |n><n|
//                          + (n+1) J_n^E |n+1><n+1| + ... ],
//
// and the rate / signal-to-noise analyses built on them. Combinatorial
// factors n and n+1 belong to the expansion and are not stored.
namespace cpm::micro {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

struct DetectorParams {
  double lambda0_nm = 500.0;  // sensor resonance wavelength
  double g_hz = 1e11;         // sensor-field coupling
  double b = 380.0;           // bias ratio gamma / g
  double nbar_det = 1e-11;    // reservoir mean excitations
  double upsilon = 5e5;       // averaging product gamma * T

  double gamma() const noexcept { return b * g_hz; }
  // Averaging time T = upsilon / gamma (infinite when b = 0).
  double averaging_time() const noexcept;
  double omega0() const noexcept;

  // Throws InvalidArgument when a field or the weak-coupling ordering
  // omega0 >> gamma, g is violated.
  void validate() const;
};

struct FieldMode {
  double lambda_nm = 500.0;

  double omega() const noexcept;
  void validate() const;
};

// q = (omega0 - omega) / g.
double detuning(const DetectorParams& params, const FieldMode& mode);

struct DressedEval {
  int n = 0;
  double q = 0.0;
  std::complex<double> delta;  // (q - i b) / 2
  std::complex<double> b_n;    // sqrt(n + delta^2), Re >= 0
  std::complex<double> c_n;    // cos(g t B_n)
  std::complex<double> s_n;    // sin(g t B_n) / B_n
  std::complex<double> chi_n;  // e^{-i omega t/2} (C_n - i delta S_n)
};

DressedEval dressed_eval(const DetectorParams& params, const FieldMode& mode,
                         int n, double t_seconds);

// Two-term exponential forms of the dressed functions in the time variable,
// optical phases dropped. `flip_branch` selects -B_n; the functions are
// even in B_n so the result must not change.
expint::Factor chi_factor(const DetectorParams& params, const FieldMode& mode,
                          int n, bool flip_branch = false);
expint::Factor s_factor(const DetectorParams& params, const FieldMode& mode,
                        int n, bool flip_branch = false);

// Coefficients in Hz.
double bright_coeff(const DetectorParams& params, const FieldMode& mode,
                    int n);
double dark_coeff(const DetectorParams& params, const FieldMode& mode, int n);
double emission_coeff(const DetectorParams& params, const FieldMode& mode,
                      int n);

struct QjsTable {
  int n_max = 0;
  std::vector<double> jb;  // index n = 0..n_max, jb[0] unused (= 0)
  std::vector<double> jd;
  std::vector<double> je;
  double rb = 0.0;         // J_1^B
  double rd = 0.0;         // J_0^D
  double snr = 0.0;        // rb / rd, +inf when rd == 0
  double beta_fit = 0.0;   // J_n^B ~ J_1^B n^{-2 beta}
  double xi_fit = 0.0;     // mean of J_n^D n^{2 beta} / J_0^D, n >= 1
};

QjsTable qjs_table(const DetectorParams& params, const FieldMode& mode,
                   int n_max, unsigned threads = 1);

// Least-squares slope of log(jb[n]/jb[1]) against log n over [2, n_max],
// returned as beta = -slope / 2.
double fit_beta(std::span<const double> jb);
double fit_xi(std::span<const double> jd, double beta);

struct SnrPoint {
  double b = 0.0;
  double rb = 0.0;
  double rd = 0.0;
  double snr = 0.0;
};

struct SnrScan {
  std::vector<SnrPoint> points;
  double plateau = 0.0;
  // b where S first falls below drop_fraction * plateau (linear
  // interpolation inside the crossing interval); empty if it never does.
  std::optional<double> b_breakdown;
};

// `params.b` is ignored; every grid value replaces it. Throws
// PlateauUndefined when the low-b end of the grid shows no flat S.
SnrScan snr_scan(const DetectorParams& params, const FieldMode& mode,
                 std::span<const double> b_grid, unsigned threads = 1,
                 double drop_fraction = 0.5);

struct BrightnessPoint {
  double lambda_nm = 0.0;
  double rb = 0.0;
};

std::vector<BrightnessPoint> brightness_vs_wavelength(
    const DetectorParams& params, std::span<const double> lambda_grid_nm,
    unsigned threads = 1);

// Drops every cached coefficient.
void clear_coefficient_cache();

}  // namespace cpm::micro
