#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "funcmodel.hpp"
#include "interval.hpp"
#include "matcore.hpp"

namespace matmono {

enum class CertificateKind { NodeTuple, MatrixPair, JensenPair, InfeasibleDual, Measure };

/// What the payload is evidence for; decides how the margin is recomputed.
enum class CheckKind {
  Loewner,         // nodes; margin = min eig of the Loewner matrix
  Kraus,           // nodes + anchor
  LocalMonotone,   // nodes[0]
  LocalConvex,     // nodes[0]
  F0Nonpositive,   // margin = -f(0)
  MonotonePair,    // a <= b; margin = min eig f(b) - f(a)
  ConvexPair,      // a, b, weight
  Jensen,          // a, c; margin = min eig c*f(a)c - f(c*ac)
  Projection,      // a, p
  TwoContraction,  // a, b, c, d with c*c + d*d <= 1
  CnOperator,      // A, T with T*AT <= A; margin = min eig f(A) - T*f(A)T
  CnDual,          // nodes = S, grid, values = dual vector
  CnMeasure,       // nodes = S, grid, values = weights
};

const char* certificate_kind_name(CertificateKind kind);
const char* check_kind_name(CheckKind kind);
CertificateKind certificate_kind_of(CheckKind check);

/// Self-contained evidence: the function is stored as mini-language text,
/// so the margin can be recomputed without any generator state.
struct Certificate {
  CheckKind check = CheckKind::Loewner;
  std::string function;
  IntervalSpec interval = IntervalSpec::open(0.0, 1.0);
  std::vector<double> nodes;
  std::optional<double> anchor;
  std::vector<Matrix> matrices;
  double weight = 0.0;
  /// Kernel grid; +inf is the atom at infinity.
  std::vector<double> grid;
  std::vector<double> values;
  double margin = 0.0;
  double scale = 1.0;
  double tolerance = 0.0;
  /// True for evidence of a violation (FAIL), false for a supporting measure.
  bool violation = true;

  CertificateKind kind() const { return certificate_kind_of(check); }
  bool operator==(const Certificate&) const = default;
};

struct MarginCheck {
  double margin = 0.0;
  double scale = 1.0;
  /// Side conditions of the payload (order of the pair, contraction norm,
  /// spectra inside the interval, nonnegative weights, dual feasibility).
  bool hypothesis_ok = true;
  std::string detail;
};

/// Recomputes margin and scale from the payload alone.
MarginCheck recompute_margin(const Certificate& cert);
/// Same, with the function already parsed (hot loops).
MarginCheck evaluate_certificate(const FunctionSpec& f, const Certificate& cert);

/// True when the recomputed margin has the sign the certificate claims:
/// margin < -tolerance*scale for violations, margin >= 0 for measures.
bool recheck(const Certificate& cert);

// Kernel of the Pick-type representation on (0,1):
//   k(lambda, t) = (1+t) lambda / (1 + (t-1) lambda),  k(lambda, inf) = 1.
double pick_kernel(double lambda, double t);
/// t_j = u/(1-u), u = j/size for j < size, then +inf.
std::vector<double> kernel_grid(int size);
Matrix kernel_matrix(const std::vector<double>& lambdas, const std::vector<double>& grid);
/// Images in (0,1) of points of `interval` under the increasing transfer map.
std::vector<double> to_unit_interval(const IntervalSpec& interval, const std::vector<double>& points);

/// Slack allowed on a^T K >= 0 when re-checking a dual certificate.
inline constexpr double kDualSlack = 1e-7;
/// Slack allowed on side conditions (a <= b, |c| <= 1) after serialization.
inline constexpr double kHypothesisSlack = 1e-12;

nlohmann::json to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json interval_to_json(const IntervalSpec& in);
/// Non-finite values travel as the strings "inf", "-inf" and "nan".
nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);
IntervalSpec interval_from_json(const nlohmann::json& j);

}  // namespace matmono
