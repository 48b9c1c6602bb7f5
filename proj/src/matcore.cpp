#include "matcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "sampling.hpp"

namespace matmono {

namespace {

template <class S>
double residual(const typename BasicHermitianMatrix<S>::Dense& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

template <class S>
BasicHermitianMatrix<S> BasicHermitianMatrix<S>::from_dense(const Dense& entries) {
  if (entries.rows() < 1 || entries.rows() != entries.cols())
    fail(ErrorCode::NonHermitian, "Hermitian matrix must be square with dim >= 1, got " +
                                      std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  if (!entries.allFinite()) fail(ErrorCode::NonHermitian, "matrix has non-finite entries");
  const double r = residual<S>(entries);
  if (r > kHermitianTolerance)
    fail(ErrorCode::NonHermitian, "symmetry residual " + fmt(r) + " exceeds " + fmt(kHermitianTolerance));
  return symmetrized(entries);
}

template <class S>
BasicHermitianMatrix<S> BasicHermitianMatrix<S>::symmetrized(const Dense& entries) {
  if (entries.rows() < 1 || entries.rows() != entries.cols())
    fail(ErrorCode::NonHermitian, "Hermitian matrix must be square with dim >= 1");
  Dense sym = (entries + entries.adjoint()) * 0.5;
  return BasicHermitianMatrix(std::move(sym));
}

template <class S>
BasicHermitianMatrix<S> BasicHermitianMatrix<S>::diagonal(const Vector& values) {
  return BasicHermitianMatrix(values.cast<S>().asDiagonal().toDenseMatrix());
}

template <class S>
BasicHermitianMatrix<S> BasicHermitianMatrix<S>::operator+(const BasicHermitianMatrix& o) const {
  if (o.dim() != dim()) fail(ErrorCode::DimensionMismatch, "dimension mismatch in sum");
  return BasicHermitianMatrix(entries_ + o.entries_);
}

template <class S>
BasicHermitianMatrix<S> BasicHermitianMatrix<S>::operator-(const BasicHermitianMatrix& o) const {
  if (o.dim() != dim()) fail(ErrorCode::DimensionMismatch, "dimension mismatch in difference");
  return BasicHermitianMatrix(entries_ - o.entries_);
}

template <class S>
BasicHermitianMatrix<S> BasicHermitianMatrix<S>::congruence(const Dense& c) const {
  if (c.rows() != dim()) fail(ErrorCode::DimensionMismatch, "congruence factor has wrong row count");
  return symmetrized(c.adjoint() * entries_ * c);
}

template <class S>
typename BasicHermitianMatrix<S>::Dense SpectralDecomposition<S>::reconstruct() const {
  return eigenvectors * eigenvalues.cast<S>().asDiagonal() * eigenvectors.adjoint();
}

template <class S>
SpectralDecomposition<S> eig_decompose(const BasicHermitianMatrix<S>& a) {
  Eigen::SelfAdjointEigenSolver<typename BasicHermitianMatrix<S>::Dense> solver(a.dense());
  if (solver.info() != Eigen::Success) fail(ErrorCode::NonHermitian, "eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <class S>
BasicHermitianMatrix<S> apply_function(const FunctionSpec& f, const BasicHermitianMatrix<S>& a) {
  const SpectralDecomposition<S> eig = eig_decompose(a);
  Vector values(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double lambda = eig.eigenvalues[i];
    try {
      values[i] = f.eval(lambda);
    } catch (const Error& e) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.17g", lambda);
      throw Error(e.code(), std::string("eigenvalue ") + buf + " outside the domain " + f.domain().to_string() +
                                " of " + f.text() + ": " + e.what());
    }
  }
  return BasicHermitianMatrix<S>::symmetrized(eig.eigenvectors * values.cast<S>().asDiagonal() *
                                              eig.eigenvectors.adjoint());
}

template <class S>
BasicPsdVerdict<S> psd_check(const BasicHermitianMatrix<S>& m, double tol) {
  if (!(tol >= 0.0)) fail(ErrorCode::InvalidArgument, "psd tolerance must be nonnegative");
  const SpectralDecomposition<S> eig = eig_decompose(m);
  BasicPsdVerdict<S> v;
  v.min_eigenvalue = eig.eigenvalues[0];
  v.scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  v.tolerance_used = tol;
  v.is_psd = v.min_eigenvalue >= -tol * v.scale;
  if (!v.is_psd) v.witness = eig.eigenvectors.col(0);
  return v;
}

template <class S>
BasicPsdVerdict<S> loewner_leq(const BasicHermitianMatrix<S>& a, const BasicHermitianMatrix<S>& b, double tol) {
  if (a.dim() != b.dim())
    fail(ErrorCode::DimensionMismatch, "loewner_leq on " + std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                                           " and " + std::to_string(b.dim()) + "x" + std::to_string(b.dim()));
  return psd_check(b - a, tol);
}

template class BasicHermitianMatrix<double>;
template class BasicHermitianMatrix<std::complex<double>>;
template struct SpectralDecomposition<double>;
template struct SpectralDecomposition<std::complex<double>>;
template SpectralDecomposition<double> eig_decompose(const HermitianMatrix&);
template SpectralDecomposition<std::complex<double>> eig_decompose(const ComplexHermitianMatrix&);
template HermitianMatrix apply_function(const FunctionSpec&, const HermitianMatrix&);
template ComplexHermitianMatrix apply_function(const FunctionSpec&, const ComplexHermitianMatrix&);
template PsdVerdict psd_check(const HermitianMatrix&, double);
template BasicPsdVerdict<std::complex<double>> psd_check(const ComplexHermitianMatrix&, double);
template PsdVerdict loewner_leq(const HermitianMatrix&, const HermitianMatrix&, double);
template BasicPsdVerdict<std::complex<double>> loewner_leq(const ComplexHermitianMatrix&,
                                                           const ComplexHermitianMatrix&, double);

double operator_norm(const Matrix& c) {
  if (c.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(c).singularValues()(0);
}

double operator_norm(const Eigen::MatrixXcd& c) {
  if (c.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(c).singularValues()(0);
}

namespace {

Matrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = n(rng);
  return g;
}

int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(double lo, double hi, Rng& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

Matrix random_orthogonal(int dim, Rng& rng) {
  const Matrix g = gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

std::pair<HermitianMatrix, HermitianMatrix> random_ordered_pair(int dim, const IntervalSpec& interval, Rng& rng) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "pair dimension must be positive");
  const double scale = interval.scale();
  const double safe_upper = clamp_interior(interval, interval.upper_finite() ? interval.upper() : 1e300);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> nodes;
    if (uniform(0.0, 1.0, rng) < 0.2) {
      auto stress = stress_tuples(interval, dim, rng);
      nodes = stress[uniform_int(0, static_cast<int>(stress.size()) - 1, rng)];
    } else {
      nodes = sample_nodes(interval, dim, rng);
    }
    const Vector t = Eigen::Map<const Vector>(nodes.data(), dim);
    const Matrix u = uniform(0.0, 1.0, rng) < 0.15 ? Matrix::Identity(dim, dim) : random_orthogonal(dim, rng);
    Matrix a = u * t.asDiagonal() * u.transpose();
    a = 0.5 * (a + a.transpose());

    const int rank = uniform_int(0, dim, rng);
    Matrix gap = Matrix::Zero(dim, dim);
    for (int i = 0; i < rank; ++i) {
      Vector w = gaussian(dim, 1, rng).col(0);
      w.normalize();
      const double r = scale * std::pow(10.0, uniform(-4.0, 0.0, rng));
      gap += r * w * w.transpose();
    }
    if (rank > 0) gap += 1e-12 * (scale + a.cwiseAbs().maxCoeff()) * Matrix::Identity(dim, dim);
    Matrix b = a + gap;
    b = 0.5 * (b + b.transpose());

    const double lo = t.minCoeff();
    const double hi = Eigen::SelfAdjointEigenSolver<Matrix>(b, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    if (hi > safe_upper) {
      if (!(safe_upper > lo)) continue;
      const double p = (safe_upper - lo) / (hi - lo);
      const Matrix shift = lo * Matrix::Identity(dim, dim);
      a = shift + p * (a - shift);
      b = shift + p * (b - shift);
    }
    auto pa = HermitianMatrix::symmetrized(a);
    auto pb = HermitianMatrix::symmetrized(b);
    const auto ea = eig_decompose(pa).eigenvalues;
    const auto eb = eig_decompose(pb).eigenvalues;
    auto inside = [&](const Vector& e) {
      for (double v : e)
        if (!interval.interior(v)) return false;
      return true;
    };
    if (!inside(ea) || !inside(eb)) continue;
    if (!loewner_leq(pa, pb, 0.0).is_psd) continue;
    return {pa, pb};
  }
  fail(ErrorCode::SamplerExhausted, "ordered-pair sampler exhausted 10000 attempts on " + interval.to_string());
}

Matrix contraction_of_branch(int dim, ContractionBranch branch, Rng& rng) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "contraction dimension must be positive");
  switch (branch) {
    case ContractionBranch::Identity: return Matrix::Identity(dim, dim);
    case ContractionBranch::Projection: {
      const int rank = uniform_int(0, dim, rng);
      const Matrix q = random_orthogonal(dim, rng).leftCols(rank);
      Matrix p = q * q.transpose();
      return 0.5 * (p + p.transpose());
    }
    case ContractionBranch::PartialIsometry: {
      // Range/kernel split: c = V P with P a projection of rank < dim.
      const int rank = uniform_int(0, dim - 1, rng);
      const Matrix q = random_orthogonal(dim, rng).leftCols(rank);
      return random_orthogonal(dim, rng) * (q * q.transpose());
    }
    case ContractionBranch::Scaled:
    case ContractionBranch::General: {
      Vector sigma(dim);
      for (int i = 0; i < dim; ++i) sigma[i] = uniform(0.0, 1.0, rng);
      if (uniform(0.0, 1.0, rng) < 0.5) sigma[uniform_int(0, dim - 1, rng)] = 1.0;
      if (branch == ContractionBranch::Scaled) sigma *= uniform(0.0, 1.0, rng);
      Matrix c = random_orthogonal(dim, rng) * sigma.asDiagonal() * random_orthogonal(dim, rng).transpose();
      const double norm = operator_norm(c);
      if (norm > 1.0) c /= norm;
      return c;
    }
  }
  return Matrix::Identity(dim, dim);
}

Matrix random_contraction(int dim, Rng& rng, ContractionBranch* branch) {
  const double u = uniform(0.0, 1.0, rng);
  ContractionBranch b = ContractionBranch::General;
  if (u < 0.1) b = ContractionBranch::Identity;
  else if (u < 0.3) b = ContractionBranch::Projection;
  else if (u < 0.4) b = ContractionBranch::PartialIsometry;
  else if (u < 0.6) b = ContractionBranch::Scaled;
  if (branch) *branch = b;
  return contraction_of_branch(dim, b, rng);
}

Eigen::MatrixXcd random_complex_contraction(int dim, Rng& rng) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "contraction dimension must be positive");
  const Eigen::MatrixXcd g(gaussian(dim, dim, rng).cast<std::complex<double>>() +
                           std::complex<double>(0.0, 1.0) * gaussian(dim, dim, rng).cast<std::complex<double>>());
  Eigen::MatrixXcd c = g;
  const double norm = operator_norm(c);
  if (norm > 0) c *= uniform(0.0, 1.0, rng) / norm;
  return c;
}

}  // namespace matmono
