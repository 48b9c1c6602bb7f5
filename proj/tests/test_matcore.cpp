#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "funcmodel.hpp"
#include "matcore.hpp"

using namespace matmono;

namespace {

HermitianMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return HermitianMatrix::from_dense(m);
}

Matrix random_symmetric(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("eig_decompose on small closed forms") {
  CHECK(eig_decompose(HermitianMatrix::identity(3)).eigenvalues.isApprox(Vector::Ones(3)));
  const Vector d = eig_decompose(sym({{2, 0}, {0, -1}})).eigenvalues;
  CHECK(d[0] == doctest::Approx(-1));
  CHECK(d[1] == doctest::Approx(2));
  const Vector s = eig_decompose(sym({{0, 1}, {1, 0}})).eigenvalues;
  CHECK(s[0] == doctest::Approx(-1));
  CHECK(s[1] == doctest::Approx(1));
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix m(2, 2);
  m << 1, 2, 2.001, 1;
  CHECK_THROWS_AS(HermitianMatrix::from_dense(m), Error);
  try {
    HermitianMatrix::from_dense(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitian);
  }
  CHECK_THROWS_AS(HermitianMatrix::from_dense(Matrix::Zero(2, 3)), Error);
}

TEST_CASE("eig_decompose round trip on random matrices") {
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 8;
    const HermitianMatrix a = HermitianMatrix::from_dense(random_symmetric(n, rng));
    const auto sd = eig_decompose(a);
    const double fro = a.dense().norm();
    CHECK((sd.reconstruct() - a.dense()).norm() <= 1e-10 * std::max(1.0, fro));
    CHECK((sd.eigenvectors.transpose() * sd.eigenvectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int i = 1; i < n; ++i) CHECK(sd.eigenvalues[i - 1] <= sd.eigenvalues[i]);
  }
}

TEST_CASE("complex Hermitian matrices share the interface") {
  Eigen::MatrixXcd m(2, 2);
  m << 2.0, std::complex<double>(0, 1), std::complex<double>(0, -1), 2.0;
  const auto a = ComplexHermitianMatrix::from_dense(m);
  const Vector ev = eig_decompose(a).eigenvalues;
  CHECK(ev[0] == doctest::Approx(1));
  CHECK(ev[1] == doctest::Approx(3));
  CHECK(psd_check(a).is_psd);
}

TEST_CASE("apply_function by functional calculus") {
  const HermitianMatrix a = sym({{2, 1}, {1, 1}});
  CHECK(apply_function(parse_function("poly:0,1"), a).dense().isApprox(a.dense()));
  Matrix sq(2, 2);
  sq << 5, 3, 3, 2;
  CHECK(apply_function(parse_function("poly:0,0,1"), a).dense().isApprox(sq, 1e-12));
  Vector d(2);
  d << 0.0, std::log(2.0);
  const Matrix e = apply_function(parse_function("exp"), HermitianMatrix::diagonal(d)).dense();
  CHECK(e(0, 0) == doctest::Approx(1));
  CHECK(e(1, 1) == doctest::Approx(2));
  CHECK(std::abs(e(0, 1)) < 1e-15);
}

TEST_CASE("apply_function names the offending eigenvalue") {
  Vector d(2);
  d << -0.5, 1.0;
  try {
    apply_function(parse_function("sqrt"), HermitianMatrix::diagonal(d));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
    CHECK(std::string(e.what()).find("-0.5") != std::string::npos);
  }
  // Within the snap tolerance of an endpoint is fine.
  d << -1e-12, 1.0;
  CHECK_NOTHROW(apply_function(parse_function("sqrt"), HermitianMatrix::diagonal(d)));
}

TEST_CASE("apply_function respects composition") {
  Rng rng(5);
  const FunctionSpec inner = parse_function("poly:1,0,1");  // 1 + t^2 > 0
  const FunctionSpec outer = parse_function("log");
  const FunctionSpec both = FunctionSpec::composition(outer, inner);
  for (int k = 0; k < 50; ++k) {
    const HermitianMatrix a = HermitianMatrix::from_dense(random_symmetric(1 + k % 5, rng));
    const Matrix lhs = apply_function(both, a).dense();
    const Matrix rhs = apply_function(outer, apply_function(inner, a)).dense();
    CHECK((lhs - rhs).norm() <= 1e-8);
  }
}

TEST_CASE("psd_check verdicts and witness") {
  auto v = psd_check(HermitianMatrix::identity(2), 1e-9);
  CHECK(v.is_psd);
  CHECK(v.min_eigenvalue == doctest::Approx(1));
  const HermitianMatrix m = sym({{1, 2}, {2, 1}});
  v = psd_check(m, 1e-9);
  CHECK_FALSE(v.is_psd);
  CHECK(v.min_eigenvalue == doctest::Approx(-1));
  CHECK(v.witness.norm() == doctest::Approx(1));
  CHECK(v.witness.dot(m.dense() * v.witness) == doctest::Approx(v.min_eigenvalue).epsilon(1e-9));
  v = psd_check(HermitianMatrix::zero(3), 1e-9);
  CHECK(v.is_psd);
  CHECK(v.min_eigenvalue == doctest::Approx(0));
}

TEST_CASE("psd_check is monotone in the tolerance") {
  Rng rng(9);
  for (int k = 0; k < 200; ++k) {
    const HermitianMatrix m = HermitianMatrix::from_dense(random_symmetric(3, rng) + 2.5 * Matrix::Identity(3, 3));
    for (double t1 : {0.0, 1e-9, 1e-3, 0.1})
      if (psd_check(m, t1).is_psd)
        for (double t2 : {t1, 2 * t1 + 1e-12, 1.0}) CHECK(psd_check(m, t2).is_psd);
  }
}

TEST_CASE("loewner_leq") {
  const HermitianMatrix a = sym({{1, 0.3}, {0.3, 2}});
  CHECK(loewner_leq(a, a).is_psd);
  CHECK(loewner_leq(HermitianMatrix::zero(2), HermitianMatrix::identity(2)).is_psd);
  CHECK_FALSE(loewner_leq(sym({{1, 0}, {0, 0}}), sym({{0, 0}, {0, 1}})).is_psd);
  CHECK_THROWS_AS(loewner_leq(HermitianMatrix::zero(2), HermitianMatrix::zero(3)), Error);
}

TEST_CASE("random_ordered_pair is ordered, interior and seeded") {
  const IntervalSpec unit = IntervalSpec::closed_open(0.0, 1.0);
  for (int dim = 1; dim <= 4; ++dim) {
    Rng rng(42 + dim);
    for (int k = 0; k < 300; ++k) {
      auto [a, b] = random_ordered_pair(dim, unit, rng);
      CHECK(loewner_leq(a, b, 0.0).is_psd);
      for (const HermitianMatrix* m : {&a, &b})
        for (double v : eig_decompose(*m).eigenvalues) CHECK(unit.interior(v));
    }
  }
  Rng r1(42), r2(42);
  auto p1 = random_ordered_pair(3, unit, r1);
  auto p2 = random_ordered_pair(3, unit, r2);
  CHECK(p1.first == p2.first);
  CHECK(p1.second == p2.second);
}

TEST_CASE("scalar function order is preserved on sampled scalar pairs") {
  Rng rng(17);
  const IntervalSpec half = IntervalSpec::open(0.0, 10.0);
  for (const char* text : {"sqrt", "log", "poly:0,1,0,1", "moebius:1,0,1,1"}) {
    const FunctionSpec f = parse_function(text);
    for (int k = 0; k < 200; ++k) {
      auto [a, b] = random_ordered_pair(1, half, rng);
      CHECK(apply_function(f, a)(0, 0) <= apply_function(f, b)(0, 0));
    }
  }
}

TEST_CASE("random_contraction branches") {
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    ContractionBranch branch;
    const Matrix c = random_contraction(1 + k % 4, rng, &branch);
    CHECK(operator_norm(c) <= 1 + 1e-12);
  }
  for (int dim = 1; dim <= 4; ++dim) {
    const Matrix p = contraction_of_branch(dim, ContractionBranch::Projection, rng);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(contraction_of_branch(dim, ContractionBranch::Identity, rng) == Matrix::Identity(dim, dim));
    const Matrix v = contraction_of_branch(dim, ContractionBranch::PartialIsometry, rng);
    const Matrix vv = v.transpose() * v;
    CHECK((vv * vv - vv).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(operator_norm(random_complex_contraction(dim, rng)) <= 1 + 1e-12);
  }
}
