#include "funcmodel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"

namespace matmono {

struct FunctionSpec::Node {
  FunctionKind kind = FunctionKind::Polynomial;
  IntervalSpec domain = IntervalSpec::real_line();
  std::vector<double> coeffs;
  Builtin builtin = Builtin::Sqrt;
  std::shared_ptr<const Node> outer;
  std::shared_ptr<const Node> inner;
  double basepoint = 0.0;
  // f(0) for ShiftedToZero, primitive(basepoint) for Antiderivative.
  double offset = 0.0;
  int gap_order = 0;
};

namespace {

using Node = FunctionSpec::Node;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::shared_ptr<const Node> make(Node n) { return std::make_shared<const Node>(std::move(n)); }

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

IntervalSpec moebius_domain(double c, double d) {
  if (c == 0.0) {
    if (d <= 0.0) fail(ErrorCode::InvalidArgument, "moebius with c = 0 needs d > 0");
    return IntervalSpec::real_line();
  }
  const double pole = -d / c;
  return c > 0 ? IntervalSpec::open(pole, kInf) : IntervalSpec::open(-kInf, pole);
}

IntervalSpec builtin_domain(Builtin b) {
  switch (b) {
    case Builtin::Sqrt: return IntervalSpec(0.0, kInf, true, false);
    case Builtin::Log: return IntervalSpec::open(0.0, kInf);
    case Builtin::Exp: return IntervalSpec::real_line();
    case Builtin::Reciprocal: return IntervalSpec::open(0.0, kInf);
  }
  return IntervalSpec::real_line();
}

double eval_node(const Node& n, double t);

double checked_eval(const Node& n, double t) { return eval_node(n, n.domain.snap(t)); }

double primitive(const Node& g, double t);

double eval_node(const Node& n, double t) {
  switch (n.kind) {
    case FunctionKind::Polynomial: return horner(n.coeffs, t);
    case FunctionKind::Moebius: {
      const double den = n.coeffs[2] * t + n.coeffs[3];
      if (!(den > 0.0)) fail(ErrorCode::Domain, "moebius denominator vanishes at " + num(t));
      return (n.coeffs[0] * t + n.coeffs[1]) / den;
    }
    case FunctionKind::Builtin:
      switch (n.builtin) {
        case Builtin::Sqrt: return std::sqrt(t);
        case Builtin::Log: return std::log(t);
        case Builtin::Exp: return std::exp(t);
        case Builtin::Reciprocal: return 1.0 / t;
      }
      break;
    case FunctionKind::Transfer: return t / (1.0 - t);
    case FunctionKind::TransferInverse: return t / (1.0 + t);
    case FunctionKind::Affine: return n.coeffs[0] * t + n.coeffs[1];
    case FunctionKind::Composition: return checked_eval(*n.outer, checked_eval(*n.inner, t));
    case FunctionKind::QuotientByT:
      if (t == 0.0) fail(ErrorCode::Domain, "quotient by t evaluated at 0");
      return checked_eval(*n.inner, t) / t;
    case FunctionKind::ShiftedToZero: return checked_eval(*n.inner, t) - n.offset;
    case FunctionKind::Antiderivative: return primitive(*n.inner, t) - n.offset;
  }
  fail(ErrorCode::InvalidArgument, "unknown function kind");
}

jet::Series taylor_node(const Node& n, double t, int order);

jet::Series checked_taylor(const Node& n, double t, int order) {
  const double s = n.domain.snap(t);
  if (order > 0 && !n.domain.interior(s))
    fail(ErrorCode::Domain, "derivatives need an interior point, got " + num(t) + " for domain " +
                                n.domain.to_string());
  return taylor_node(n, s, order);
}

jet::Series moebius_series(double a, double b, double c, double d, double t, int order) {
  jet::Series num_s = jet::constant(a * t + b, order);
  jet::Series den_s = jet::constant(c * t + d, order);
  if (order >= 1) {
    num_s[1] = a;
    den_s[1] = c;
  }
  if (!(den_s[0] > 0.0)) fail(ErrorCode::Domain, "moebius denominator vanishes at " + num(t));
  return jet::div(num_s, den_s);
}

jet::Series taylor_node(const Node& n, double t, int order) {
  switch (n.kind) {
    case FunctionKind::Polynomial: return jet::polynomial_taylor(n.coeffs, t, order);
    case FunctionKind::Moebius:
      return moebius_series(n.coeffs[0], n.coeffs[1], n.coeffs[2], n.coeffs[3], t, order);
    case FunctionKind::Builtin: {
      const jet::Series x = jet::variable(t, order);
      switch (n.builtin) {
        case Builtin::Sqrt: return jet::sqrt(x);
        case Builtin::Log: return jet::log(x);
        case Builtin::Exp: return jet::exp(x);
        case Builtin::Reciprocal: return jet::div(jet::constant(1.0, order), x);
      }
      break;
    }
    case FunctionKind::Transfer: return moebius_series(1.0, 0.0, -1.0, 1.0, t, order);
    case FunctionKind::TransferInverse: return moebius_series(1.0, 0.0, 1.0, 1.0, t, order);
    case FunctionKind::Affine: {
      jet::Series s = jet::constant(n.coeffs[0] * t + n.coeffs[1], order);
      if (order >= 1) s[1] = n.coeffs[0];
      return s;
    }
    case FunctionKind::Composition: {
      const jet::Series u = checked_taylor(*n.inner, t, order);
      return jet::compose(checked_taylor(*n.outer, u[0], order), u);
    }
    case FunctionKind::QuotientByT:
      if (t == 0.0) fail(ErrorCode::Domain, "quotient by t expanded at 0");
      return jet::div(checked_taylor(*n.inner, t, order), jet::variable(t, order));
    case FunctionKind::ShiftedToZero: {
      jet::Series s = checked_taylor(*n.inner, t, order);
      s[0] -= n.offset;
      return s;
    }
    case FunctionKind::Antiderivative: {
      jet::Series s(order + 1, 0.0);
      s[0] = primitive(*n.inner, t) - n.offset;
      if (order >= 1) {
        const jet::Series g = checked_taylor(*n.inner, t, order - 1);
        for (int k = 1; k <= order; ++k) s[k] = g[k - 1] / k;
      }
      return s;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown function kind");
}

[[noreturn]] void no_primitive(const Node& g) {
  fail(ErrorCode::NoAntiderivative, "no closed-form antiderivative for " + FunctionSpec(make(g)).text());
}

// Value of a fixed primitive P of g (P' = g) at t.
double primitive(const Node& g, double t) {
  switch (g.kind) {
    case FunctionKind::Polynomial: {
      double acc = 0.0;
      for (std::size_t i = g.coeffs.size(); i-- > 0;) acc = acc * t + g.coeffs[i] / static_cast<double>(i + 1);
      return acc * t;
    }
    case FunctionKind::Affine: return 0.5 * g.coeffs[0] * t * t + g.coeffs[1] * t;
    case FunctionKind::Moebius:
    case FunctionKind::Transfer:
    case FunctionKind::TransferInverse: {
      double a = 1.0, b = 0.0, c = -1.0, d = 1.0;
      if (g.kind == FunctionKind::Moebius) {
        a = g.coeffs[0], b = g.coeffs[1], c = g.coeffs[2], d = g.coeffs[3];
      } else if (g.kind == FunctionKind::TransferInverse) {
        c = 1.0;
      }
      if (c == 0.0) return (0.5 * a * t * t + b * t) / d;
      const double den = c * t + d;
      if (!(den > 0.0)) fail(ErrorCode::Domain, "moebius denominator vanishes at " + num(t));
      return (a / c) * t + ((b * c - a * d) / (c * c)) * std::log(den);
    }
    case FunctionKind::Builtin:
      switch (g.builtin) {
        case Builtin::Sqrt: return (2.0 / 3.0) * t * std::sqrt(t);
        case Builtin::Log: return t * std::log(t) - t;
        case Builtin::Exp: return std::exp(t);
        case Builtin::Reciprocal: return std::log(t);
      }
      break;
    case FunctionKind::QuotientByT: {
      const Node& f = *g.inner;
      std::vector<double> c;
      if (f.kind == FunctionKind::Polynomial) c = f.coeffs;
      else if (f.kind == FunctionKind::Affine) c = {f.coeffs[1], f.coeffs[0]};
      else no_primitive(g);
      double acc = c.empty() ? 0.0 : c[0] * std::log(std::abs(t));
      for (std::size_t k = 1; k < c.size(); ++k) acc += c[k] * std::pow(t, static_cast<double>(k)) / k;
      return acc;
    }
    case FunctionKind::ShiftedToZero: return primitive(*g.inner, t) - g.offset * t;
    case FunctionKind::Composition: {
      const Node& in = *g.inner;
      double slope = 0.0, intercept = 0.0;
      if (in.kind == FunctionKind::Affine) {
        slope = in.coeffs[0], intercept = in.coeffs[1];
      } else if (in.kind == FunctionKind::Polynomial && in.coeffs.size() == 2) {
        slope = in.coeffs[1], intercept = in.coeffs[0];
      } else {
        no_primitive(g);
      }
      if (slope == 0.0) no_primitive(g);
      return primitive(*g.outer, slope * t + intercept) / slope;
    }
    case FunctionKind::Antiderivative: break;
  }
  no_primitive(g);
}

std::string node_text(const Node& n) {
  switch (n.kind) {
    case FunctionKind::Polynomial: {
      if (n.gap_order > 0) return "gap:" + std::to_string(n.gap_order);
      std::string s = "poly:";
      if (n.coeffs.empty()) return s + "0";
      for (std::size_t i = 0; i < n.coeffs.size(); ++i) s += (i ? "," : "") + num(n.coeffs[i]);
      return s;
    }
    case FunctionKind::Moebius:
      return "moebius:" + num(n.coeffs[0]) + "," + num(n.coeffs[1]) + "," + num(n.coeffs[2]) + "," +
             num(n.coeffs[3]);
    case FunctionKind::Builtin: return builtin_name(n.builtin);
    case FunctionKind::Transfer: return "moebius:1,0,-1,1";
    case FunctionKind::TransferInverse: return "moebius:1,0,1,1";
    case FunctionKind::Affine: return "poly:" + num(n.coeffs[1]) + "," + num(n.coeffs[0]);
    case FunctionKind::Composition: return "compose(" + node_text(*n.outer) + ";" + node_text(*n.inner) + ")";
    case FunctionKind::QuotientByT: return "quot(" + node_text(*n.inner) + ")";
    case FunctionKind::ShiftedToZero: return "shift0(" + node_text(*n.inner) + ")";
    case FunctionKind::Antiderivative: return "integ(" + node_text(*n.inner) + ";" + num(n.basepoint) + ")";
  }
  return "?";
}

}  // namespace

const char* builtin_name(Builtin b) {
  switch (b) {
    case Builtin::Sqrt: return "sqrt";
    case Builtin::Log: return "log";
    case Builtin::Exp: return "exp";
    case Builtin::Reciprocal: return "recip";
  }
  return "?";
}

FunctionSpec FunctionSpec::polynomial(std::vector<double> coefficients) {
  Node n;
  n.kind = FunctionKind::Polynomial;
  for (double c : coefficients)
    if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "polynomial coefficients must be finite");
  n.coeffs = coefficients.empty() ? std::vector<double>{0.0} : std::move(coefficients);
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::moebius(double a, double b, double c, double d) {
  Node n;
  n.kind = FunctionKind::Moebius;
  n.coeffs = {a, b, c, d};
  n.domain = moebius_domain(c, d);
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::builtin(Builtin name) {
  Node n;
  n.kind = FunctionKind::Builtin;
  n.builtin = name;
  n.domain = builtin_domain(name);
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::transfer() {
  Node n;
  n.kind = FunctionKind::Transfer;
  n.domain = IntervalSpec::open(-kInf, 1.0);
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::transfer_inverse() {
  Node n;
  n.kind = FunctionKind::TransferInverse;
  n.domain = IntervalSpec::open(-1.0, kInf);
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::affine(double slope, double intercept) {
  Node n;
  n.kind = FunctionKind::Affine;
  n.coeffs = {slope, intercept};
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::composition(const FunctionSpec& outer, const FunctionSpec& inner) {
  Node n;
  n.kind = FunctionKind::Composition;
  n.outer = outer.node_;
  n.inner = inner.node_;
  n.domain = inner.domain();
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec FunctionSpec::shifted_to_zero(const FunctionSpec& inner) {
  if (!inner.domain().contains(0.0))
    fail(ErrorCode::Domain, "shift to zero needs f(0); 0 is outside " + inner.domain().to_string());
  Node n;
  n.kind = FunctionKind::ShiftedToZero;
  n.inner = inner.node_;
  n.offset = inner.eval(0.0);
  n.domain = inner.domain();
  return FunctionSpec(make(std::move(n)));
}

FunctionKind FunctionSpec::kind() const { return node_->kind; }
const IntervalSpec& FunctionSpec::domain() const { return node_->domain; }

FunctionSpec FunctionSpec::restricted(const IntervalSpec& domain) const {
  const IntervalSpec& d = node_->domain;
  const bool lower_ok = domain.lower() > d.lower() || (domain.lower() == d.lower() &&
                                                       (d.lower_closed() || !domain.lower_closed()));
  const bool upper_ok = domain.upper() < d.upper() || (domain.upper() == d.upper() &&
                                                       (d.upper_closed() || !domain.upper_closed()));
  if (!lower_ok || !upper_ok)
    fail(ErrorCode::Domain, "cannot restrict " + text() + " on " + d.to_string() + " to " + domain.to_string());
  Node n = *node_;
  n.domain = domain;
  return FunctionSpec(make(std::move(n)));
}

double FunctionSpec::eval(double t) const { return checked_eval(*node_, t); }

jet::Series FunctionSpec::taylor(double t, int order) const {
  if (order < 0 || order > kMaxDerivativeOrder)
    fail(ErrorCode::UnsupportedOrder, "derivative order " + std::to_string(order) + " outside 0.." +
                                          std::to_string(kMaxDerivativeOrder));
  return checked_taylor(*node_, t, order);
}

double FunctionSpec::derivative(double t, int k) const {
  if (k == 0) return eval(t);
  const jet::Series s = taylor(t, k);
  return s[k] * std::tgamma(k + 1.0);
}

std::optional<std::vector<double>> FunctionSpec::polynomial_coefficients() const {
  if (node_->kind == FunctionKind::Polynomial) return node_->coeffs;
  if (node_->kind == FunctionKind::Affine) return std::vector<double>{node_->coeffs[1], node_->coeffs[0]};
  return std::nullopt;
}

std::string FunctionSpec::text() const { return node_text(*node_); }

double eval(const FunctionSpec& f, double t) { return f.eval(t); }
double derivative_eval(const FunctionSpec& f, double t, int k) { return f.derivative(t, k); }

FunctionSpec quotient_by_t(const FunctionSpec& f) {
  const IntervalSpec& d = f.domain();
  IntervalSpec domain = d;
  if (d.upper() > 0.0) {
    domain = d.lower() >= 0.0 ? IntervalSpec(d.lower(), d.upper(), d.lower_closed() && d.lower() > 0.0,
                                             d.upper_closed())
                              : IntervalSpec(0.0, d.upper(), false, d.upper_closed());
  } else {
    domain = IntervalSpec(d.lower(), d.upper(), d.lower_closed(), d.upper_closed() && d.upper() < 0.0);
  }
  if (auto c = f.polynomial_coefficients(); c && c->front() == 0.0) {
    std::vector<double> reduced(c->begin() + 1, c->end());
    return FunctionSpec::polynomial(std::move(reduced)).restricted(domain);
  }
  Node n;
  n.kind = FunctionKind::QuotientByT;
  n.inner = std::make_shared<const Node>(f.node());
  n.domain = domain;
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec transfer_map(const IntervalSpec& source, const IntervalSpec& target) {
  if (source.finite() && target.finite()) {
    const double slope = (target.upper() - target.lower()) / (source.upper() - source.lower());
    return FunctionSpec::affine(slope, target.lower() - slope * source.lower()).restricted(source);
  }
  if (source.finite() && target.lower_finite() && !target.upper_finite()) {
    // t -> c + (t - a)/(b - t)
    const double a = source.lower(), b = source.upper(), c = target.lower();
    if (a == 0.0 && b == 1.0 && c == 0.0) return FunctionSpec::transfer().restricted(source);
    return FunctionSpec::moebius(1.0 - c, c * b - a, -1.0, b).restricted(source);
  }
  if (target.finite() && source.lower_finite() && !source.upper_finite()) {
    // s -> (b s + a - b c)/(s + 1 - c), inverse of the map above
    const double a = target.lower(), b = target.upper(), c = source.lower();
    if (a == 0.0 && b == 1.0 && c == 0.0) return FunctionSpec::transfer_inverse().restricted(source);
    return FunctionSpec::moebius(b, a - b * c, 1.0, 1.0 - c).restricted(source);
  }
  fail(ErrorCode::InvalidArgument, "unsupported interval pair " + source.to_string() + " -> " + target.to_string());
}

FunctionSpec antiderivative(const FunctionSpec& g, double basepoint) {
  if (!g.domain().contains(basepoint))
    fail(ErrorCode::Domain, "basepoint " + num(basepoint) + " outside " + g.domain().to_string());
  if (auto c = g.polynomial_coefficients()) {
    std::vector<double> integ(c->size() + 1, 0.0);
    for (std::size_t i = 0; i < c->size(); ++i) integ[i + 1] = (*c)[i] / static_cast<double>(i + 1);
    integ[0] = -horner(integ, basepoint);
    return FunctionSpec::polynomial(std::move(integ)).restricted(g.domain());
  }
  Node n;
  n.kind = FunctionKind::Antiderivative;
  n.inner = std::make_shared<const Node>(g.node());
  n.basepoint = basepoint;
  n.offset = primitive(*n.inner, basepoint);
  n.domain = g.domain();
  return FunctionSpec(make(std::move(n)));
}

FunctionSpec gap_polynomial(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gap polynomial order must be positive");
  std::vector<double> c(2 * n, 0.0);
  for (int k = 1; k <= n; ++k) c[2 * k - 1] = 1.0 / (2 * k - 1);
  Node node;
  node.kind = FunctionKind::Polynomial;
  node.coeffs = std::move(c);
  node.gap_order = n;
  return FunctionSpec(make(std::move(node)));
}

}  // namespace matmono
