#include "jet.hpp"

#include <cassert>
#include <cmath>

namespace matmono::jet {

Series variable(double t, int order) {
  Series s(order + 1, 0.0);
  s[0] = t;
  if (order >= 1) s[1] = 1.0;
  return s;
}

Series constant(double c, int order) {
  Series s(order + 1, 0.0);
  s[0] = c;
  return s;
}

Series add(const Series& a, const Series& b) {
  assert(a.size() == b.size());
  Series r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
  return r;
}

Series scale(const Series& a, double factor) {
  Series r(a);
  for (double& v : r) v *= factor;
  return r;
}

Series mul(const Series& a, const Series& b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  Series r(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j <= k; ++j) r[k] += a[j] * b[k - j];
  return r;
}

Series div(const Series& a, const Series& b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  Series q(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  return q;
}

Series sqrt(const Series& u) {
  const std::size_t n = u.size();
  Series s(n, 0.0);
  s[0] = std::sqrt(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = u[k];
    for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / (2.0 * s[0]);
  }
  return s;
}

Series exp(const Series& u) {
  const std::size_t n = u.size();
  Series e(n, 0.0);
  e[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * u[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

Series log(const Series& u) {
  const std::size_t n = u.size();
  Series l(n, 0.0);
  l[0] = std::log(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j < k; ++j) acc += static_cast<double>(j) * l[j] * u[k - j];
    l[k] = (u[k] - acc / static_cast<double>(k)) / u[0];
  }
  return l;
}

Series compose(const Series& outer, const Series& u) {
  assert(outer.size() == u.size());
  const std::size_t n = u.size();
  Series delta(u);
  delta[0] = 0.0;
  Series r = constant(outer[n - 1], static_cast<int>(n) - 1);
  for (std::size_t k = n - 1; k-- > 0;) {
    r = mul(r, delta);
    r[0] += outer[k];
  }
  return r;
}

Series polynomial_taylor(std::span<const double> coefficients, double t, int order) {
  // Repeated synthetic division by (x - t): the k-th remainder is p^{(k)}(t)/k!.
  std::vector<double> work(coefficients.begin(), coefficients.end());
  Series s(order + 1, 0.0);
  for (int k = 0; k <= order && !work.empty(); ++k) {
    double acc = 0.0;
    for (std::size_t i = work.size(); i-- > 0;) {
      acc = acc * t + work[i];
      work[i] = acc;
    }
    s[k] = work.front();
    work.erase(work.begin());
  }
  return s;
}

}  // namespace matmono::jet
