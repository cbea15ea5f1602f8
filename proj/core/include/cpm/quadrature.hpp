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
#include <vector>

namespace cpm::quad {

// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const Rule& gauss_legendre(std::size_t order);

// Panel edges a = e_0 < e_1 < ... < e_m = b whose widths grow geometrically
// by `ratio` away from `a`, starting at `first`. Resolves integrands with a
// boundary layer at a.
std::vector<double> graded_edges(double a, double b, double first,
                                 double ratio);

// Same, with the layer at both ends.
std::vector<double> two_sided_edges(double a, double b, double first,
                                    double ratio);

std::vector<double> uniform_edges(double a, double b, std::size_t panels);

// Composite Gauss-Legendre over the given panel edges.
double integrate(const std::function<double(double)>& f,
                 const std::vector<double>& edges, std::size_t order);

// Composite trapezoid on samples y(x) over an ascending grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cpm::quad
