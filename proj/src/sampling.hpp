#pragma once

#include <vector>

#include "interval.hpp"
#include "matcore.hpp"

namespace matmono {

/// Strictly interior point: uniform on finite intervals; half lines use the
/// Moebius image u/(1-u) of a uniform u, the real line uses tan.
double sample_interior(const IntervalSpec& interval, Rng& rng);

std::vector<double> sample_nodes(const IntervalSpec& interval, int count, Rng& rng);

/// Deterministic (given the generator state) hard cases: tight clusters,
/// endpoint-adjacent nodes, nodes split between both ends, even spreads.
std::vector<std::vector<double>> stress_tuples(const IntervalSpec& interval, int count, Rng& rng);

/// Closest point to t that keeps a relative clearance `margin` from the endpoints.
double clamp_interior(const IntervalSpec& interval, double t, double margin = 1e-9);

}  // namespace matmono
