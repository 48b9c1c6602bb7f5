#include "nnls.hpp"

#include <limits>
#include <vector>

#include "errors.hpp"

namespace matmono {

namespace {

Vector solve_passive(const Matrix& a, const Vector& b, const std::vector<bool>& passive) {
  std::vector<int> cols;
  for (int j = 0; j < static_cast<int>(passive.size()); ++j)
    if (passive[j]) cols.push_back(j);
  Vector z = Vector::Zero(a.cols());
  if (cols.empty()) return z;
  Matrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(k) = a.col(cols[k]);
  const Vector zs = sub.colPivHouseholderQr().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = zs[k];
  return z;
}

}  // namespace

NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations) {
  if (a.rows() != b.size()) fail(ErrorCode::DimensionMismatch, "nnls: row count differs from rhs length");
  const int n = static_cast<int>(a.cols());
  if (max_iterations <= 0) max_iterations = 3 * n + 30;
  // Columns enter while a^T r exceeds rounding relative to the current residual,
  // so -r/|r| is a usable dual vector when the fit is not exact.
  const double col_norm = a.colwise().norm().maxCoeff();
  const double eps = std::numeric_limits<double>::epsilon();

  NnlsResult out;
  out.x = Vector::Zero(n);
  std::vector<bool> passive(n, false);
  Vector w = a.transpose() * (b - a * out.x);

  int iter = 0;
  while (true) {
    const double rnorm = (b - a * out.x).norm();
    const double tol = 10.0 * eps * col_norm * std::max(rnorm, eps * b.norm());
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;
    if (++iter > max_iterations) {
      out.converged = false;
      break;
    }
    passive[best] = true;

    while (true) {
      Vector z = solve_passive(a, b, passive);
      bool feasible = true;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) feasible = false;
      if (feasible) {
        out.x = z;
        break;
      }
      // Step back to the boundary and drop the columns that hit zero.
      double alpha = std::numeric_limits<double>::infinity();
      int blocking = -1;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) {
          const double denom = out.x[j] - z[j];
          const double step = denom > 0.0 ? out.x[j] / denom : 0.0;
          if (step < alpha) {
            alpha = step;
            blocking = j;
          }
        }
      out.x += alpha * (z - out.x);
      out.x[blocking] = 0.0;
      for (int j = 0; j < n; ++j)
        if (passive[j] && out.x[j] <= 0.0) {
          passive[j] = false;
          out.x[j] = 0.0;
        }
    }
    w = a.transpose() * (b - a * out.x);
  }
  out.iterations = iter;
  out.residual = b - a * out.x;
  return out;
}

}  // namespace matmono
