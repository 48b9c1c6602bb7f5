#pragma once

#include "matcore.hpp"

namespace matmono {

struct NnlsResult {
  Vector x;
  /// b - A x
  Vector residual;
  int iterations = 0;
  bool converged = true;
};

/// min |A x - b| subject to x >= 0 (Lawson-Hanson active set).
NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations = 0);

}  // namespace matmono
