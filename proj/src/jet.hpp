#pragma once

#include <span>
#include <vector>

// Truncated Taylor series: s[k] is the coefficient of h^k, i.e. f^{(k)}(t)/k!.
// All series passed to one operation share the same truncation order.
namespace matmono::jet {

using Series = std::vector<double>;

/// t + h, truncated at `order`.
Series variable(double t, int order);
Series constant(double c, int order);

Series add(const Series& a, const Series& b);
Series scale(const Series& a, double factor);
Series mul(const Series& a, const Series& b);
/// Requires b[0] != 0.
Series div(const Series& a, const Series& b);

Series sqrt(const Series& u);
Series exp(const Series& u);
Series log(const Series& u);

/// outer(u(h)) where `outer` holds the Taylor coefficients of the outer
/// function at u[0]. Horner evaluation in the nilpotent part u - u[0].
Series compose(const Series& outer, const Series& u);

/// Taylor coefficients of the polynomial sum c_k x^k at x = t.
Series polynomial_taylor(std::span<const double> coefficients, double t, int order);

}  // namespace matmono::jet
