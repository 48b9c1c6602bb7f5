#include <doctest.h>

#include <cmath>

#include "certificate.hpp"
#include "errors.hpp"

using namespace matmono;

TEST_CASE("node tuple certificate for t^2 at 0.25, 0.75") {
  Certificate c;
  c.check = CheckKind::Loewner;
  c.function = "poly:0,0,1";
  c.interval = IntervalSpec::open(0, 1);
  c.nodes = {0.25, 0.75};
  c.tolerance = 1e-9;
  const MarginCheck m = recompute_margin(c);
  // [[0.5, 1], [1, 1.5]]: eigenvalues 1 -/+ sqrt(1.25).
  CHECK(m.margin == doctest::Approx(1 - std::sqrt(1.25)));
  CHECK(m.hypothesis_ok);
  c.margin = m.margin;
  c.scale = m.scale;
  CHECK(recheck(c));
  Certificate tampered = c;
  tampered.nodes[1] = 0.5;
  CHECK_FALSE(recheck(tampered));
  tampered = c;
  tampered.function = "poly:0,1";
  CHECK_FALSE(recheck(tampered));
}

TEST_CASE("measure certificates for lambda and 1") {
  const std::vector<double> grid = kernel_grid(256);
  CHECK(grid.size() == 257);
  CHECK(grid[128] == doctest::Approx(1.0));
  CHECK(std::isinf(grid.back()));
  for (double l : {0.1, 0.5, 0.9}) {
    CHECK(pick_kernel(l, 1.0) == doctest::Approx(2 * l));
    CHECK(pick_kernel(l, grid.back()) == 1.0);
  }
  Certificate c;
  c.check = CheckKind::CnMeasure;
  c.violation = false;
  c.function = "poly:0,1";
  c.interval = IntervalSpec::open(0, 1);
  c.nodes = {0.3, 0.6};
  c.grid = grid;
  c.values.assign(grid.size(), 0.0);
  c.values[128] = 0.5;
  c.tolerance = 1e-10;
  MarginCheck m = recompute_margin(c);
  c.margin = m.margin;
  CHECK(recheck(c));
  CHECK(c.tolerance * std::sqrt(0.3 * 0.3 + 0.6 * 0.6) - m.margin <= 1e-10);

  c.function = "poly:1";
  c.values.assign(grid.size(), 0.0);
  c.values.back() = 1.0;
  m = recompute_margin(c);
  c.margin = m.margin;
  CHECK(recheck(c));

  c.values.back() = -1.0;
  CHECK_FALSE(recompute_margin(c).hypothesis_ok);
}

TEST_CASE("json round trip keeps every field") {
  Certificate c;
  c.check = CheckKind::ConvexPair;
  c.function = "compose(sqrt;moebius:1,0,-1,1)";
  c.interval = IntervalSpec::closed_open(0, 0.5);
  Matrix a(2, 2);
  a << 0.1, 0.01, 0.01, 0.2;
  c.matrices = {a, 2 * a};
  c.weight = 0.3;
  c.margin = -1.25e-3;
  c.scale = 1.5;
  c.tolerance = 1e-9;
  c.grid = {0.0, 1.0, std::numeric_limits<double>::infinity()};
  c.values = {0.1, 0.2, 0.3};
  const Certificate back = certificate_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(back == c);
  CHECK(to_json(c)["kind"] == "matrix_pair");
}

TEST_CASE("malformed certificates are schema errors") {
  try {
    certificate_from_json(nlohmann::json{{"check", "loewner"}});
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schema);
  }
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json{{"check", "bogus"}}), Error);
}

TEST_CASE("unit interval images") {
  const auto l = to_unit_interval(IntervalSpec::open(0, std::numeric_limits<double>::infinity()), {1.0, 3.0});
  CHECK(l[0] == doctest::Approx(0.5));
  CHECK(l[1] == doctest::Approx(0.75));
  const auto s = to_unit_interval(IntervalSpec::open(2, 4), {3.0});
  CHECK(s[0] == doctest::Approx(0.5));
}
