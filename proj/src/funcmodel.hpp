#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "interval.hpp"
#include "jet.hpp"

namespace matmono {

enum class FunctionKind {
  Polynomial,
  Moebius,
  Builtin,
  Transfer,          // t / (1 - t)
  TransferInverse,   // t / (1 + t)
  Affine,
  Composition,
  QuotientByT,
  ShiftedToZero,
  Antiderivative,
};

enum class Builtin { Sqrt, Log, Exp, Reciprocal };

/// Highest derivative order served by derivative_eval and taylor.
inline constexpr int kMaxDerivativeOrder = 24;

/// Immutable description of a real function on an interval with exact
/// evaluation of all derivatives. Cheap to copy (shared node).
class FunctionSpec {
 public:
  static FunctionSpec polynomial(std::vector<double> coefficients);
  /// (a t + b) / (c t + d) on the side of the pole where c t + d > 0.
  static FunctionSpec moebius(double a, double b, double c, double d);
  static FunctionSpec builtin(Builtin name);
  static FunctionSpec transfer();
  static FunctionSpec transfer_inverse();
  static FunctionSpec affine(double slope, double intercept);
  /// outer(inner(t)).
  static FunctionSpec composition(const FunctionSpec& outer, const FunctionSpec& inner);
  static FunctionSpec shifted_to_zero(const FunctionSpec& inner);

  FunctionKind kind() const;
  const IntervalSpec& domain() const;
  /// Same function restricted to `domain`, which must lie inside the current one.
  FunctionSpec restricted(const IntervalSpec& domain) const;

  double eval(double t) const;
  double derivative(double t, int k) const;
  /// Taylor coefficients f^{(k)}(t)/k!, k = 0..order, at an interior point.
  jet::Series taylor(double t, int order) const;

  /// Polynomial coefficients (ascending) when kind() is Polynomial or Affine.
  std::optional<std::vector<double>> polynomial_coefficients() const;

  /// Canonical mini-language text; parses back to an equivalent function.
  std::string text() const;

  struct Node;
  explicit FunctionSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

double eval(const FunctionSpec& f, double t);
double derivative_eval(const FunctionSpec& f, double t, int k);

/// g(t) = f(t)/t on the positive side of f's domain. Polynomials with zero
/// constant term come back as the degree-reduced polynomial.
FunctionSpec quotient_by_t(const FunctionSpec& f);

/// Increasing bijection from `source` onto `target`: affine between finite
/// intervals, Moebius between a finite interval and a half line.
FunctionSpec transfer_map(const IntervalSpec& source, const IntervalSpec& target);

/// G with G(basepoint) = 0 and G' = g, for kinds with an elementary primitive.
FunctionSpec antiderivative(const FunctionSpec& g, double basepoint);

/// x + x^3/3 + ... + x^(2n-1)/(2n-1).
FunctionSpec gap_polynomial(int n);

/// Parses the function mini-language; throws ParseError with the offending position.
FunctionSpec parse_function(const std::string& text);

const char* builtin_name(Builtin b);

}  // namespace matmono
