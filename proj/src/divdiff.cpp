#include "divdiff.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace matmono {

namespace {

// Blocks narrower than this fraction of max(1,|centre|) try the Taylor route.
constexpr double kTaylorSpread = 0.05;
// Extra Taylor terms beyond the block order for non-polynomial functions.
constexpr int kTaylorExtra = 18;

bool coincident(double a, double b) {
  return std::abs(a - b) <= kCoincidence * std::max({1.0, std::abs(a), std::abs(b)});
}

// h_0..h_r of the variables x (complete homogeneous symmetric polynomials).
std::vector<double> complete_homogeneous(std::span<const double> x, int r) {
  std::vector<double> h(r + 1, 0.0);
  h[0] = 1.0;
  for (double xi : x)
    for (int k = 1; k <= r; ++k) h[k] += xi * h[k - 1];
  return h;
}

// [x_0..x_m]_f from the Taylor series at the block midpoint. Empty when the
// series has not converged to double precision over the block.
std::optional<double> taylor_block(const FunctionSpec& f, std::span<const double> t, int poly_degree) {
  const int m = static_cast<int>(t.size()) - 1;
  const double spread = t.back() - t.front();
  const double centre = 0.5 * (t.front() + t.back());
  if (spread == 0.0) return f.taylor(centre, m)[m];

  const bool exact = poly_degree >= 0;
  const int order = exact ? std::max(m, poly_degree) : std::min(kMaxDerivativeOrder, m + kTaylorExtra);
  if (order - m < 0) return std::nullopt;
  const jet::Series a = f.taylor(centre, order);
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = t[i] - centre;
  const std::vector<double> h = complete_homogeneous(x, order - m);

  double sum = 0.0, mass = 0.0;
  for (int k = m; k <= order; ++k) {
    const double term = a[k] * h[k - m];
    sum += term;
    mass += std::abs(term);
  }
  if (!std::isfinite(sum)) return std::nullopt;
  if (!exact) {
    double tail = std::abs(a[order] * h[order - m]);
    if (order - 1 >= m) tail += std::abs(a[order - 1] * h[order - 1 - m]);
    if (tail > 1e-16 * mass + 1e-300) return std::nullopt;
  }
  return sum;
}

bool narrow(std::span<const double> t) {
  const double centre = 0.5 * (t.front() + t.back());
  return t.back() - t.front() <= kTaylorSpread * std::max(1.0, std::abs(centre));
}

}  // namespace

double divided_difference(const FunctionSpec& f, std::span<const double> nodes) {
  if (nodes.empty()) fail(ErrorCode::InvalidArgument, "divided difference needs at least one node");
  std::vector<double> t(nodes.begin(), nodes.end());
  for (double& v : t) v = f.domain().snap(v);
  std::sort(t.begin(), t.end());

  // Merge near-coincident runs onto their first node.
  int run = 1;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (coincident(t[i], t[i - 1]) || t[i] == t[i - 1]) {
      t[i] = t[i - 1];
      if (++run - 1 > kMaxRepeatOrder)
        fail(ErrorCode::UnsupportedOrder, "node " + std::to_string(t[i]) + " repeated " + std::to_string(run) +
                                              " times; derivative order above " +
                                              std::to_string(kMaxRepeatOrder) + " is not supported");
    } else {
      run = 1;
    }
  }

  const auto coeffs = f.polynomial_coefficients();
  const int degree = coeffs ? static_cast<int>(coeffs->size()) - 1 : -1;
  const int n = static_cast<int>(t.size());
  if (n == 1) return f.eval(t[0]);
  if (degree >= 0 || narrow(t)) {
    if (auto v = taylor_block(f, t, degree)) return *v;
  }

  // table[i] holds [t_i..t_{i+m}] after pass m.
  std::vector<double> table(n);
  for (int i = 0; i < n; ++i) table[i] = f.eval(t[i]);
  for (int m = 1; m < n; ++m) {
    for (int i = 0; i + m < n; ++i) {
      const std::span<const double> block(t.data() + i, m + 1);
      std::optional<double> v;
      if (narrow(block)) v = taylor_block(f, block, degree);
      table[i] = v ? *v : (table[i + 1] - table[i]) / (t[i + m] - t[i]);
    }
  }
  return table[0];
}

const char* criterion_kind_name(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Loewner: return "loewner";
    case CriterionKind::Kraus: return "kraus";
    case CriterionKind::LocalMonotone: return "local_monotone";
    case CriterionKind::LocalConvex: return "local_convex";
  }
  return "?";
}

CriterionKind parse_criterion_kind(const std::string& name) {
  for (CriterionKind k : {CriterionKind::Loewner, CriterionKind::Kraus, CriterionKind::LocalMonotone,
                          CriterionKind::LocalConvex})
    if (name == criterion_kind_name(k)) return k;
  fail(ErrorCode::InvalidArgument, "unknown criterion kind '" + name + "'");
}

CriterionMatrix loewner_matrix(const FunctionSpec& f, std::span<const double> nodes) {
  const int n = static_cast<int>(nodes.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "Loewner matrix needs at least one node");
  CriterionMatrix out{CriterionKind::Loewner, Matrix(n, n), {nodes.begin(), nodes.end()}, std::nullopt};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double pair[2] = {nodes[i], nodes[j]};
      out.entries(i, j) = out.entries(j, i) = divided_difference(f, pair);
    }
  return out;
}

CriterionMatrix kraus_matrix(const FunctionSpec& f, std::span<const double> nodes, double s) {
  const int n = static_cast<int>(nodes.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "Kraus matrix needs at least one node");
  CriterionMatrix out{CriterionKind::Kraus, Matrix(n, n), {nodes.begin(), nodes.end()}, s};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double triple[3] = {nodes[i], nodes[j], s};
      out.entries(i, j) = out.entries(j, i) = divided_difference(f, triple);
    }
  return out;
}

CriterionMatrix local_criterion_matrix(const FunctionSpec& f, double t, CriterionKind kind) {
  const double x = f.domain().snap(t);
  CriterionMatrix out{kind, Matrix(2, 2), {x}, std::nullopt};
  if (kind == CriterionKind::LocalConvex) {
    const jet::Series a = f.taylor(x, 4);
    out.entries << a[2], a[3], a[3], a[4];
  } else if (kind == CriterionKind::LocalMonotone) {
    const jet::Series a = f.taylor(x, 3);
    out.entries << a[1], a[2], a[2], a[3];
  } else {
    fail(ErrorCode::InvalidArgument, "local criterion must be local_monotone or local_convex");
  }
  return out;
}

}  // namespace matmono
