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

#include "cpm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "cpm/error.hpp"

namespace cpm::quad {
namespace {

Rule build_rule(std::size_t order) {
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const Rule& gauss_legendre(std::size_t order) {
  if (order < 2) throw InvalidArgument("Gauss-Legendre order must be >= 2");
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

std::vector<double> graded_edges(double a, double b, double first,
                                 double ratio) {
  if (!(b > a) || !(first > 0.0) || !(ratio >= 1.0)) {
    throw InvalidArgument("graded_edges needs b > a, first > 0, ratio >= 1");
  }
  std::vector<double> edges{a};
  double width = first;
  while (edges.back() + width < b) {
    edges.push_back(edges.back() + width);
    width *= ratio;
  }
  edges.push_back(b);
  return edges;
}

std::vector<double> two_sided_edges(double a, double b, double first,
                                    double ratio) {
  const double mid = 0.5 * (a + b);
  auto left = graded_edges(a, mid, first, ratio);
  const auto right = graded_edges(a, mid, first, ratio);
  for (auto it = right.rbegin() + 1; it != right.rend(); ++it) {
    left.push_back(a + b - *it);
  }
  return left;
}

std::vector<double> uniform_edges(double a, double b, std::size_t panels) {
  std::vector<double> edges(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    edges[i] = a + (b - a) * static_cast<double>(i) /
                       static_cast<double>(panels);
  }
  return edges;
}

double integrate(const std::function<double(double)>& f,
                 const std::vector<double>& edges, std::size_t order) {
  const Rule& rule = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    double s = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
      s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += half * s;
  }
  return total;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("trapezoid size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
  return s;
}

}  // namespace cpm::quad
