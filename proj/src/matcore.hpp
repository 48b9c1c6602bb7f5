#pragma once

#include <complex>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "funcmodel.hpp"
#include "interval.hpp"

namespace matmono {

using Rng = std::mt19937_64;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kDefaultPsdTolerance = 1e-9;

/// Dense self-adjoint matrix. Real symmetric by default; the complex
/// instantiation shares the interface.
template <class S>
class BasicHermitianMatrix {
 public:
  using Scalar = S;
  using Dense = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Column = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  /// Rejects non-square input or a symmetry residual above 1e-12.
  static BasicHermitianMatrix from_dense(const Dense& entries);
  /// (M + M*)/2; for results of arithmetic that are Hermitian up to rounding.
  static BasicHermitianMatrix symmetrized(const Dense& entries);
  static BasicHermitianMatrix identity(int dim) { return BasicHermitianMatrix(Dense::Identity(dim, dim)); }
  static BasicHermitianMatrix zero(int dim) { return BasicHermitianMatrix(Dense::Zero(dim, dim)); }
  static BasicHermitianMatrix diagonal(const Vector& values);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Dense& dense() const { return entries_; }
  S operator()(int i, int j) const { return entries_(i, j); }

  BasicHermitianMatrix operator+(const BasicHermitianMatrix& o) const;
  BasicHermitianMatrix operator-(const BasicHermitianMatrix& o) const;
  BasicHermitianMatrix operator*(double factor) const { return BasicHermitianMatrix(entries_ * factor); }
  /// c* A c for a general (not necessarily square) c.
  BasicHermitianMatrix congruence(const Dense& c) const;

  bool operator==(const BasicHermitianMatrix& o) const { return entries_ == o.entries_; }

 private:
  explicit BasicHermitianMatrix(Dense entries) : entries_(std::move(entries)) {}
  Dense entries_;
};

using HermitianMatrix = BasicHermitianMatrix<double>;
using ComplexHermitianMatrix = BasicHermitianMatrix<std::complex<double>>;

template <class S>
struct SpectralDecomposition {
  Vector eigenvalues;  // ascending
  typename BasicHermitianMatrix<S>::Dense eigenvectors;

  typename BasicHermitianMatrix<S>::Dense reconstruct() const;
};

template <class S>
struct BasicPsdVerdict {
  bool is_psd = true;
  double min_eigenvalue = 0.0;
  /// Unit eigenvector of the smallest eigenvalue; filled when is_psd is false.
  typename BasicHermitianMatrix<S>::Column witness;
  double tolerance_used = 0.0;
  /// max(1, |M|_2), the factor the tolerance is scaled by.
  double scale = 1.0;
};

using PsdVerdict = BasicPsdVerdict<double>;

template <class S>
SpectralDecomposition<S> eig_decompose(const BasicHermitianMatrix<S>& a);

/// f(A) = V diag(f(lambda_i)) V*. Eigenvalues within 1e-10 of an endpoint of
/// f's domain are snapped inward; anything farther out is a Domain error.
template <class S>
BasicHermitianMatrix<S> apply_function(const FunctionSpec& f, const BasicHermitianMatrix<S>& a);

/// is_psd = lambda_min >= -tol * max(1, |M|_2).
template <class S>
BasicPsdVerdict<S> psd_check(const BasicHermitianMatrix<S>& m, double tol = kDefaultPsdTolerance);

/// psd_check(b - a, tol).
template <class S>
BasicPsdVerdict<S> loewner_leq(const BasicHermitianMatrix<S>& a, const BasicHermitianMatrix<S>& b,
                               double tol = kDefaultPsdTolerance);

/// Spectral norm of a general matrix.
double operator_norm(const Matrix& c);
double operator_norm(const Eigen::MatrixXcd& c);

/// Haar-distributed orthogonal matrix.
Matrix random_orthogonal(int dim, Rng& rng);

/// Seeded pair a <= b with every eigenvalue strictly inside `interval`.
/// a = U diag(nodes) U^T; b adds a rank-k PSD gap, k uniform in 0..dim; both
/// are mapped by one increasing affine map when the spectra leave the interval.
std::pair<HermitianMatrix, HermitianMatrix> random_ordered_pair(int dim, const IntervalSpec& interval, Rng& rng);

enum class ContractionBranch { Identity, Projection, PartialIsometry, Scaled, General };

/// Operator norm <= 1. Identity, projections (ranks 0..dim) and rank-deficient
/// partial isometries each occur with positive probability.
Matrix random_contraction(int dim, Rng& rng, ContractionBranch* branch = nullptr);
Matrix contraction_of_branch(int dim, ContractionBranch branch, Rng& rng);
Eigen::MatrixXcd random_complex_contraction(int dim, Rng& rng);

}  // namespace matmono
