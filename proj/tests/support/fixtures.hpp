#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "interpnet/core_data.hpp"
#include "interpnet/experiments.hpp"
#include "interpnet/sqann.hpp"

namespace fixtures {

using interpnet::Dataset;
using interpnet::Vector;

/// Three points on a descending staircase: (1,1), (0.5,2), (0,3).
inline Dataset three_steps() { return Dataset::from_rows({{1.0}, {0.5}, {0.0}}, {{1.0}, {2.0}, {3.0}}); }

/// Two pairs of 2-D points labelled 1 and 0.
inline Dataset four_points() {
  return Dataset::from_rows({{1.0, 1.2}, {1.2, 0.8}, {-1.0, -1.0}, {-1.2, -1.2}}, {{1.0}, {1.0}, {0.0}, {0.0}});
}

inline const std::vector<Vector>& four_points_external() {
  static const std::vector<Vector> xs{{1.25, 1.25}, {-1.25, -1.0}, {-1.0, -1.4}};
  return xs;
}

/// Random 1-D dataset with distinct inputs in [0, 1) and outputs in [-u, u].
inline Dataset random_line(interpnet::Rng& rng, std::size_t n, double u, std::size_t first_index = 0) {
  std::set<double> seen;
  std::vector<interpnet::Sample> samples;
  while (samples.size() < n) {
    const double x = rng.uniform(0.0, 1.0);
    if (!seen.insert(x).second) {
      continue;
    }
    samples.push_back({{x}, {rng.uniform(-u, u)}, first_index + samples.size()});
  }
  return Dataset(std::move(samples));
}

/// Random dataset with inputs in [0, 1)^dim. With `coarse`, components are
/// snapped to a grid (plus tiny jitter) so that collisions are common.
inline Dataset random_cloud(interpnet::Rng& rng, std::size_t n, std::size_t dim, bool coarse,
                            std::size_t first_index = 0) {
  static const double grid[] = {0.0, 0.004, 0.01, 0.3, 0.33, 0.6, 1.0};
  std::vector<interpnet::Sample> samples;
  std::set<Vector> seen;
  while (samples.size() < n) {
    Vector x(dim);
    for (double& c : x) {
      if (coarse) {
        c = grid[static_cast<std::size_t>(rng.uniform(0.0, 7.0))] + rng.uniform(0.0, 0.002);
      } else {
        c = rng.uniform(0.0, 1.0);
      }
    }
    if (!seen.insert(x).second) {
      continue;
    }
    samples.push_back({x, {std::round(rng.uniform(-2.0, 2.0) * 4.0) / 4.0}, first_index + samples.size()});
  }
  return Dataset(std::move(samples));
}

inline interpnet::SqannConfig random_config(interpnet::Rng& rng) {
  interpnet::SqannConfig c;
  c.tau_ad = rng.uniform(0.02, 0.4);
  c.tau_act = rng.uniform(std::max(c.tau_ad + 0.1, 0.6), 0.98);
  static const double a1s[] = {0.001, 0.003, 0.01};
  static const double a2s[] = {0.3, 0.5, 0.8};
  c.dsa.a1 = a1s[static_cast<std::size_t>(rng.uniform(0.0, 3.0))];
  c.dsa.a2 = a2s[static_cast<std::size_t>(rng.uniform(0.0, 3.0))];
  c.dsa.r = rng.uniform(0.3, 0.7);
  return c;
}

}  // namespace fixtures
