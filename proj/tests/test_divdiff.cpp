#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "divdiff.hpp"
#include "errors.hpp"
#include "funcmodel.hpp"
#include "matcore.hpp"
#include "sampling.hpp"

using namespace matmono;

namespace {

double dd(const FunctionSpec& f, std::vector<double> nodes) { return divided_difference(f, nodes); }

// [x_0..x_m] of sum c_k t^k = sum_k c_k h_{k-m}(x), h the complete homogeneous
// symmetric polynomials, built by h_j(x_0..x_i) = h_j(x_0..x_{i-1}) + x_i h_{j-1}(x_0..x_i).
double homogeneous_oracle(const std::vector<double>& c, const std::vector<double>& x) {
  const int m = static_cast<int>(x.size()) - 1;
  const int top = static_cast<int>(c.size()) - 1 - m;
  if (top < 0) return 0.0;
  std::vector<double> h(top + 1, 0.0);
  h[0] = 1.0;
  for (double xi : x)
    for (int j = 1; j <= top; ++j) h[j] += xi * h[j - 1];
  double s = 0.0;
  for (int j = 0; j <= top; ++j) s += c[j + m] * h[j];
  return s;
}

}  // namespace

TEST_CASE("divided difference examples") {
  const FunctionSpec sq = parse_function("poly:0,0,1");
  const FunctionSpec cube = parse_function("poly:0,0,0,1");
  CHECK(dd(sq, {1, 2}) == doctest::Approx(3));
  CHECK(dd(sq, {1, 2, 3}) == doctest::Approx(1));
  CHECK(dd(cube, {2, 2}) == doctest::Approx(12));
  CHECK(dd(cube, {2, 2, 2}) == doctest::Approx(6));
  CHECK(dd(cube, {2, 2, 2, 2}) == doctest::Approx(1));
  CHECK(dd(parse_function("exp"), {0.5}) == doctest::Approx(std::exp(0.5)));
}

TEST_CASE("repeat order above the supported maximum is rejected") {
  std::vector<double> nodes(kMaxRepeatOrder + 2, 0.5);
  try {
    divided_difference(parse_function("sqrt"), nodes);
    FAIL("expected UnsupportedOrder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedOrder);
  }
}

TEST_CASE("permutation invariance") {
  Rng rng(31);
  const std::vector<FunctionSpec> fs = {parse_function("sqrt"), parse_function("log"),
                                        parse_function("compose(sqrt;moebius:1,0,-1,1)"), gap_polynomial(3),
                                        parse_function("moebius:1,0,1,1")};
  const IntervalSpec in = IntervalSpec::open(0.05, 0.95);
  for (int k = 0; k < 1000; ++k) {
    const FunctionSpec& f = fs[k % fs.size()];
    std::vector<double> nodes = sample_nodes(in, 2 + k % 4, rng);
    if (k % 7 == 0) nodes[1] = nodes[0];
    const double ref = divided_difference(f, nodes);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const double perm = divided_difference(f, nodes);
    CHECK(std::abs(perm - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("coincidence limit matches the derivative") {
  Rng rng(2);
  for (const char* text : {"sqrt", "log", "exp", "moebius:1,0,-1,1", "poly:1,2,-3,4"}) {
    const FunctionSpec f = parse_function(text);
    for (int k = 0; k < 50; ++k) {
      const double t = sample_interior(IntervalSpec::open(0.1, 0.8), rng);
      const double d1 = f.derivative(t, 1);
      CHECK(std::abs(dd(f, {t, t + 1e-7}) - d1) <= 1e-6 * std::max(1.0, std::abs(d1)));
    }
  }
}

TEST_CASE("polynomials match the complete homogeneous oracle") {
  Rng rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> c(1 + k % 8);
    for (double& v : c) v = u(rng);
    std::vector<double> x(1 + k % 5);
    for (double& v : x) v = u(rng);
    if (k % 5 == 0 && x.size() > 1) x[1] = x[0] + 1e-9;
    const double oracle = homogeneous_oracle(c, x);
    const double got = divided_difference(FunctionSpec::polynomial(c), x);
    double mass = 0.0;
    for (double v : c) mass += std::abs(v);
    CHECK(std::abs(got - oracle) <= 1e-9 * std::max({1.0, std::abs(oracle), mass}));
  }
}

TEST_CASE("loewner matrix examples") {
  const std::vector<double> nodes = {1, 2};
  CHECK(loewner_matrix(parse_function("poly:0,1"), nodes).entries.isApprox(Matrix::Ones(2, 2)));
  Matrix sq(2, 2);
  sq << 2, 3, 3, 4;
  const Matrix l = loewner_matrix(parse_function("poly:0,0,1"), nodes).entries;
  CHECK(l.isApprox(sq));
  CHECK(l.determinant() == doctest::Approx(-1));
  CHECK_FALSE(psd_check(HermitianMatrix::from_dense(l)).is_psd);

  // sqrt at 1 and 4 by hand: f'(1) = 1/2, f'(4) = 1/4, (2-1)/(4-1) = 1/3.
  const std::vector<double> n14 = {1, 4};
  const Matrix s = loewner_matrix(parse_function("sqrt"), n14).entries;
  CHECK(s(0, 0) == doctest::Approx(0.5));
  CHECK(s(0, 1) == doctest::Approx(1.0 / 3));
  CHECK(s(1, 1) == doctest::Approx(0.25));
  CHECK(s.determinant() == doctest::Approx(1.0 / 72));
  CHECK(psd_check(HermitianMatrix::from_dense(s)).is_psd);
}

TEST_CASE("kraus matrix examples") {
  const std::vector<double> nodes = {0.3, 1.7, 2.2};
  CHECK(kraus_matrix(parse_function("poly:0,0,1"), nodes, 0.9).entries.isApprox(Matrix::Ones(3, 3)));
  Matrix c(2, 2);
  c << 5, 6, 6, 7;
  const std::vector<double> n12 = {1, 2};
  const Matrix k = kraus_matrix(parse_function("poly:0,0,0,1"), n12, 3).entries;
  CHECK(k.isApprox(c));
  CHECK(k.determinant() == doctest::Approx(-1));
  const std::vector<double> n11 = {1, 1};
  CHECK(kraus_matrix(parse_function("poly:0,0,0,1"), n11, 1).entries.isApprox(3 * Matrix::Ones(2, 2)));
}

TEST_CASE("kraus matrix is the loewner matrix of h_s") {
  Rng rng(6);
  for (const char* text : {"sqrt", "log", "poly:0,0,0,1", "moebius:1,0,1,1", "exp"}) {
    const FunctionSpec f = parse_function(text);
    for (int k = 0; k < 100; ++k) {
      const std::vector<double> r = sample_nodes(IntervalSpec::open(0.2, 3.0), 3, rng);
      const double s = sample_interior(IntervalSpec::open(0.2, 3.0), rng);
      if (std::abs(r[0] - r[1]) < 0.05 || std::abs(r[1] - r[2]) < 0.05 || std::abs(r[0] - r[2]) < 0.05) continue;
      if (std::min({std::abs(r[0] - s), std::abs(r[1] - s), std::abs(r[2] - s)}) < 0.05) continue;
      auto h = [&](double t) { return (f.eval(t) - f.eval(s)) / (t - s); };
      auto dh = [&](double t) { return (f.derivative(t, 1) * (t - s) - (f.eval(t) - f.eval(s))) / ((t - s) * (t - s)); };
      const Matrix kr = kraus_matrix(f, r, s).entries;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double want = i == j ? dh(r[i]) : (h(r[i]) - h(r[j])) / (r[i] - r[j]);
          CHECK(std::abs(kr(i, j) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
        }
    }
  }
}

TEST_CASE("local criterion matrices") {
  Matrix e(2, 2);
  e << 1, 0, 0, 0;
  CHECK(local_criterion_matrix(parse_function("poly:0,1"), 0.4, CriterionKind::LocalMonotone).entries.isApprox(e));
  CHECK(local_criterion_matrix(parse_function("poly:0,0,1"), 0.4, CriterionKind::LocalConvex).entries.isApprox(e));
  Matrix g(2, 2);
  g << 2, 1, 1, 0;
  const Matrix m = local_criterion_matrix(parse_function("poly:0,0,1"), 1.0, CriterionKind::LocalMonotone).entries;
  CHECK(m.isApprox(g));
  CHECK(m.determinant() == doctest::Approx(-1));
  // g(t) = 1 + t + t^3: [[g', g''/2], [g''/2, g'''/6]] = [[1 + 3t^2, 3t], [3t, 1]], det 1 - 6t^2.
  const FunctionSpec g3 = parse_function("poly:1,1,0,1");
  for (double t : {0.1, 0.3, 0.5}) {
    const Matrix lm = local_criterion_matrix(g3, t, CriterionKind::LocalMonotone).entries;
    CHECK(lm(0, 0) == doctest::Approx(1 + 3 * t * t));
    CHECK(lm(0, 1) == doctest::Approx(3 * t));
    CHECK(lm(1, 1) == doctest::Approx(1));
    CHECK(lm.determinant() == doctest::Approx(1 - 6 * t * t));
  }
}
