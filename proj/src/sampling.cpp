#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace matmono {

namespace {

double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v = u(rng);
  while (v <= 0.0) v = u(rng);
  return v;
}

// Point at relative offset `fraction` from the lower end (or a large value on a half line).
double near_lower(const IntervalSpec& in, double fraction) {
  if (in.lower_finite()) return in.lower() + fraction * in.scale();
  return (in.upper_finite() ? in.upper() : 0.0) - 1.0 / fraction;
}

double near_upper(const IntervalSpec& in, double fraction) {
  if (in.upper_finite()) return in.upper() - fraction * in.scale();
  return (in.lower_finite() ? in.lower() : 0.0) + 1.0 / fraction;
}

}  // namespace

double sample_interior(const IntervalSpec& in, Rng& rng) {
  const double u = open_uniform(rng);
  double t = 0.0;
  if (in.finite()) {
    t = in.lower() + u * (in.upper() - in.lower());
  } else if (in.lower_finite()) {
    t = in.lower() + u / (1.0 - u);
  } else if (in.upper_finite()) {
    t = in.upper() - u / (1.0 - u);
  } else {
    t = std::tan(std::numbers::pi * (u - 0.5));
  }
  return clamp_interior(in, t);
}

std::vector<double> sample_nodes(const IntervalSpec& in, int count, Rng& rng) {
  std::vector<double> nodes(count);
  for (double& t : nodes) t = sample_interior(in, rng);
  return nodes;
}

std::vector<std::vector<double>> stress_tuples(const IntervalSpec& in, int count, Rng& rng) {
  std::vector<std::vector<double>> tuples;
  const double scale = in.scale();
  for (double spacing : {1e-4, 1e-2}) {
    const double centre = sample_interior(in, rng);
    std::vector<double> t(count);
    for (int k = 0; k < count; ++k) t[k] = clamp_interior(in, centre + (k - 0.5 * (count - 1)) * spacing * scale);
    tuples.push_back(std::move(t));
  }
  for (double fraction : {1e-6, 1e-3}) {
    std::vector<double> lo(count), hi(count), split(count);
    for (int k = 0; k < count; ++k) {
      lo[k] = clamp_interior(in, near_lower(in, fraction * (k + 1)));
      hi[k] = clamp_interior(in, near_upper(in, fraction * (k + 1)));
      split[k] = clamp_interior(in, k % 2 == 0 ? near_lower(in, fraction * (k + 1)) : near_upper(in, fraction * k));
    }
    tuples.push_back(std::move(lo));
    tuples.push_back(std::move(hi));
    tuples.push_back(std::move(split));
  }
  std::vector<double> spread(count);
  for (int k = 0; k < count; ++k) {
    const double u = (k + 0.5) / count;
    spread[k] = in.finite() ? in.lower() + u * scale : sample_interior(in, rng);
  }
  tuples.push_back(std::move(spread));
  // Near-coincident pair inside an otherwise random tuple.
  std::vector<double> pair = sample_nodes(in, count, rng);
  if (count >= 2) pair[1] = clamp_interior(in, pair[0] + 1e-5 * scale);
  tuples.push_back(std::move(pair));
  return tuples;
}

double clamp_interior(const IntervalSpec& in, double t, double margin) {
  if (in.lower_finite()) {
    const double lo = in.lower() + margin * in.scale();
    t = std::max(t, lo > in.lower() ? lo : std::nextafter(in.lower(), in.upper()));
  }
  if (in.upper_finite()) {
    const double hi = in.upper() - margin * in.scale();
    t = std::min(t, hi < in.upper() ? hi : std::nextafter(in.upper(), in.lower()));
  }
  return t;
}

}  // namespace matmono
