#include "certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divdiff.hpp"
#include "errors.hpp"
#include "funcmodel.hpp"

namespace matmono {

using nlohmann::json;

namespace {

struct Eig {
  double min = 0.0;
  double scale = 1.0;
};

Eig eig_summary(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  return {ev.minCoeff(), std::max(1.0, ev.cwiseAbs().maxCoeff())};
}

bool symmetric(const Matrix& m) {
  return m.rows() == m.cols() && m.rows() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() <= kHermitianTolerance;
}

bool spectrum_inside(const Matrix& m, const IntervalSpec& in) {
  if (!symmetric(m)) return false;
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
  for (double v : ev) {
    try {
      in.snap(v);
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

bool nodes_inside(const std::vector<double>& nodes, const IntervalSpec& in) {
  for (double v : nodes) {
    try {
      in.snap(v);
    } catch (const Error&) {
      return false;
    }
  }
  return !nodes.empty();
}

// Evaluates f on matrices and records the size of what gets subtracted:
// |f(a)| and a secant bound on how far eigenvalue rounding moves f(a).
struct Evaluator {
  const FunctionSpec& f;
  double scale = 1.0;

  Matrix operator()(const Matrix& a) {
    const HermitianMatrix h = HermitianMatrix::symmetrized(a);
    const Matrix fa = apply_function(f, h).dense();
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(h.dense(), Eigen::EigenvaluesOnly).eigenvalues();
    const double norm_a = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double delta = 1e-10 * norm_a;
    double lipschitz = 0.0;
    for (double v : ev) {
      const double at = f.domain().snap(v);
      const double fv = f.eval(at);
      for (double x : {at - delta, at + delta})
        if (f.domain().contains(x)) lipschitz = std::max(lipschitz, std::abs(f.eval(x) - fv) / delta);
    }
    const double fa_norm = fa.allFinite() ? Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (fa + fa.transpose()),
                                                                                    Eigen::EigenvaluesOnly)
                                                 .eigenvalues()
                                                 .cwiseAbs()
                                                 .maxCoeff()
                                           : 0.0;
    scale = std::max({scale, fa_norm, lipschitz * norm_a});
    return fa;
  }
};

void need_matrices(const Certificate& c, std::size_t count) {
  if (c.matrices.size() != count)
    fail(ErrorCode::Schema, std::string(check_kind_name(c.check)) + " certificate needs " + std::to_string(count) +
                                " matrices, got " + std::to_string(c.matrices.size()));
  const Eigen::Index dim = c.matrices[0].rows();
  for (const Matrix& m : c.matrices)
    if (m.rows() != dim || m.cols() != dim) fail(ErrorCode::Schema, "certificate matrices differ in shape");
}

MarginCheck from_matrix(const Matrix& m, bool hypothesis) {
  const Eig e = eig_summary(m);
  return {e.min, e.scale, hypothesis, {}};
}

// Difference of matrix-function terms: normalized by its own size, floored at
// 1e-4 of the term scale so rounding and hypothesis slack stay far below -1e-6.
MarginCheck from_difference(const Matrix& d, bool hypothesis, const Evaluator& fn) {
  const Matrix sym = 0.5 * (d + d.transpose());
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  return {ev.minCoeff(), std::max(ev.cwiseAbs().maxCoeff(), 1e-4 * fn.scale), hypothesis, {}};
}

}  // namespace

const char* certificate_kind_name(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::NodeTuple: return "node_tuple";
    case CertificateKind::MatrixPair: return "matrix_pair";
    case CertificateKind::JensenPair: return "jensen_pair";
    case CertificateKind::InfeasibleDual: return "infeasible_dual";
    case CertificateKind::Measure: return "measure";
  }
  return "?";
}

const char* check_kind_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::Loewner: return "loewner";
    case CheckKind::Kraus: return "kraus";
    case CheckKind::LocalMonotone: return "local_monotone";
    case CheckKind::LocalConvex: return "local_convex";
    case CheckKind::F0Nonpositive: return "f0_nonpositive";
    case CheckKind::MonotonePair: return "monotone_pair";
    case CheckKind::ConvexPair: return "convex_pair";
    case CheckKind::Jensen: return "jensen";
    case CheckKind::Projection: return "projection";
    case CheckKind::TwoContraction: return "two_contraction";
    case CheckKind::CnOperator: return "cn_operator";
    case CheckKind::CnDual: return "cn_dual";
    case CheckKind::CnMeasure: return "cn_measure";
  }
  return "?";
}

CertificateKind certificate_kind_of(CheckKind check) {
  switch (check) {
    case CheckKind::Loewner:
    case CheckKind::Kraus:
    case CheckKind::LocalMonotone:
    case CheckKind::LocalConvex:
    case CheckKind::F0Nonpositive: return CertificateKind::NodeTuple;
    case CheckKind::MonotonePair:
    case CheckKind::ConvexPair: return CertificateKind::MatrixPair;
    case CheckKind::Jensen:
    case CheckKind::Projection:
    case CheckKind::TwoContraction:
    case CheckKind::CnOperator: return CertificateKind::JensenPair;
    case CheckKind::CnDual: return CertificateKind::InfeasibleDual;
    case CheckKind::CnMeasure: return CertificateKind::Measure;
  }
  return CertificateKind::NodeTuple;
}

double pick_kernel(double lambda, double t) {
  if (std::isinf(t)) return 1.0;
  return (1.0 + t) * lambda / (1.0 + (t - 1.0) * lambda);
}

std::vector<double> kernel_grid(int size) {
  if (size < 1) fail(ErrorCode::InvalidArgument, "kernel grid size must be positive");
  std::vector<double> grid(size + 1);
  for (int j = 0; j < size; ++j) {
    const double u = static_cast<double>(j) / size;
    grid[j] = u / (1.0 - u);
  }
  grid[size] = std::numeric_limits<double>::infinity();
  return grid;
}

Matrix kernel_matrix(const std::vector<double>& lambdas, const std::vector<double>& grid) {
  Matrix k(lambdas.size(), grid.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) k(i, j) = pick_kernel(lambdas[i], grid[j]);
  return k;
}

std::vector<double> to_unit_interval(const IntervalSpec& interval, const std::vector<double>& points) {
  const FunctionSpec map = transfer_map(interval, IntervalSpec::closed_open(0.0, 1.0));
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = map.eval(points[i]);
    if (!(out[i] > 0.0 && out[i] < 1.0)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", points[i]);
      fail(ErrorCode::Domain, std::string("point ") + buf + " is not interior to " + interval.to_string());
    }
  }
  return out;
}

MarginCheck recompute_margin(const Certificate& c) { return evaluate_certificate(parse_function(c.function), c); }

MarginCheck evaluate_certificate(const FunctionSpec& f, const Certificate& c) {
  switch (c.check) {
    case CheckKind::Loewner: {
      const bool ok = nodes_inside(c.nodes, c.interval);
      return from_matrix(loewner_matrix(f, c.nodes).entries, ok);
    }
    case CheckKind::Kraus: {
      if (!c.anchor) fail(ErrorCode::Schema, "kraus certificate needs an anchor");
      const bool ok = nodes_inside(c.nodes, c.interval) && nodes_inside({*c.anchor}, c.interval);
      return from_matrix(kraus_matrix(f, c.nodes, *c.anchor).entries, ok);
    }
    case CheckKind::LocalMonotone:
    case CheckKind::LocalConvex: {
      if (c.nodes.size() != 1) fail(ErrorCode::Schema, "local certificate needs exactly one point");
      const auto kind = c.check == CheckKind::LocalMonotone ? CriterionKind::LocalMonotone : CriterionKind::LocalConvex;
      return from_matrix(local_criterion_matrix(f, c.nodes[0], kind).entries, nodes_inside(c.nodes, c.interval));
    }
    case CheckKind::F0Nonpositive: {
      const double f0 = f.eval(0.0);
      return {-f0, std::max(1.0, std::abs(f0)), c.interval.contains(0.0), {}};
    }
    case CheckKind::MonotonePair: {
      need_matrices(c, 2);
      Evaluator fn{f};
      const Matrix& a = c.matrices[0];
      const Matrix& b = c.matrices[1];
      const Eig gap = eig_summary(b - a);
      const bool ok = spectrum_inside(a, c.interval) && spectrum_inside(b, c.interval) &&
                      gap.min >= -kHypothesisSlack * gap.scale;
      const Matrix d = fn(b) - fn(a);
      return from_difference(d, ok, fn);
    }
    case CheckKind::ConvexPair: {
      need_matrices(c, 2);
      Evaluator fn{f};
      const Matrix& a = c.matrices[0];
      const Matrix& b = c.matrices[1];
      const double w = c.weight;
      const bool ok = spectrum_inside(a, c.interval) && spectrum_inside(b, c.interval) && w >= 0.0 && w <= 1.0;
      const Matrix d = w * fn(a) + (1.0 - w) * fn(b) - fn(w * a + (1.0 - w) * b);
      return from_difference(d, ok, fn);
    }
    case CheckKind::Jensen:
    case CheckKind::Projection: {
      need_matrices(c, 2);
      Evaluator fn{f};
      const Matrix& a = c.matrices[0];
      const Matrix& k = c.matrices[1];
      bool ok = spectrum_inside(a, c.interval) && operator_norm(k) <= 1.0 + kHypothesisSlack;
      if (c.check == CheckKind::Projection)
        ok = ok && (k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-10 && (k * k - k).cwiseAbs().maxCoeff() <= 1e-10;
      const Matrix d = k.transpose() * fn(a) * k - fn(k.transpose() * a * k);
      return from_difference(d, ok, fn);
    }
    case CheckKind::TwoContraction: {
      need_matrices(c, 4);
      Evaluator fn{f};
      const Matrix& a = c.matrices[0];
      const Matrix& b = c.matrices[1];
      const Matrix& x = c.matrices[2];
      const Matrix& y = c.matrices[3];
      Matrix stacked(2 * x.rows(), x.cols());
      stacked << x, y;
      const bool ok = spectrum_inside(a, c.interval) && spectrum_inside(b, c.interval) &&
                      operator_norm(stacked) <= 1.0 + kHypothesisSlack;
      const Matrix d = x.transpose() * fn(a) * x + y.transpose() * fn(b) * y -
                       fn(x.transpose() * a * x + y.transpose() * b * y);
      return from_difference(d, ok, fn);
    }
    case CheckKind::CnOperator: {
      need_matrices(c, 2);
      Evaluator fn{f};
      const Matrix& a = c.matrices[0];
      const Matrix& t = c.matrices[1];
      const Eig hyp = eig_summary(a - t.transpose() * a * t);
      const bool ok = spectrum_inside(a, c.interval) && operator_norm(t) <= 1.0 + kHypothesisSlack &&
                      hyp.min >= -kHypothesisSlack * hyp.scale;
      const Matrix fa = fn(a);
      return from_difference(fa - t.transpose() * fa * t, ok, fn);
    }
    case CheckKind::CnDual:
    case CheckKind::CnMeasure: {
      if (c.grid.empty() || c.nodes.empty()) fail(ErrorCode::Schema, "cn certificate needs nodes and a grid");
      const std::vector<double> lambdas = to_unit_interval(c.interval, c.nodes);
      const Matrix k = kernel_matrix(lambdas, c.grid);
      Vector y(c.nodes.size());
      for (std::size_t i = 0; i < c.nodes.size(); ++i) y[i] = f.eval(c.nodes[i]);
      if (c.check == CheckKind::CnDual) {
        if (c.values.size() != c.nodes.size()) fail(ErrorCode::Schema, "dual vector length differs from node count");
        const Vector a = Eigen::Map<const Vector>(c.values.data(), c.values.size());
        const double column_min = (a.transpose() * k).minCoeff();
        return {a.dot(y), 1.0, column_min >= -kDualSlack, "min a^T K = " + std::to_string(column_min)};
      }
      if (c.values.size() != c.grid.size()) fail(ErrorCode::Schema, "weight vector length differs from grid size");
      const Vector w = Eigen::Map<const Vector>(c.values.data(), c.values.size());
      const double residual = (k * w - y).norm();
      return {c.tolerance * y.norm() - residual, 1.0, w.minCoeff() >= 0.0, "residual = " + std::to_string(residual)};
    }
  }
  fail(ErrorCode::Schema, "unknown certificate check");
}

bool recheck(const Certificate& cert) {
  const MarginCheck m = recompute_margin(cert);
  if (!m.hypothesis_ok) return false;
  if (std::abs(m.margin - cert.margin) > 1e-9 * std::max(1.0, m.scale)) return false;
  if (cert.violation) return m.margin < -cert.tolerance * m.scale;
  return m.margin >= 0.0;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::Schema, "matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) fail(ErrorCode::Schema, "matrix rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json interval_to_json(const IntervalSpec& in) { return in.to_string(); }

IntervalSpec interval_from_json(const json& j) {
  if (!j.is_string()) fail(ErrorCode::Schema, "interval must be a string such as \"[0,1)\"");
  return IntervalSpec::parse(j.get<std::string>());
}

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    fail(ErrorCode::Schema, "expected a number, found \"" + s + "\"");
  }
  return j.get<double>();
}

namespace {

CheckKind parse_check(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(CheckKind::CnMeasure); ++k)
    if (name == check_kind_name(static_cast<CheckKind>(k))) return static_cast<CheckKind>(k);
  fail(ErrorCode::Schema, "unknown certificate check '" + name + "'");
}

}  // namespace

json to_json(const Certificate& c) {
  json j;
  j["kind"] = certificate_kind_name(c.kind());
  j["check"] = check_kind_name(c.check);
  j["function"] = c.function;
  j["interval"] = interval_to_json(c.interval);
  j["violation"] = c.violation;
  j["margin"] = number_to_json(c.margin);
  j["scale"] = number_to_json(c.scale);
  j["tolerance"] = number_to_json(c.tolerance);
  if (!c.nodes.empty()) j["nodes"] = c.nodes;
  if (c.anchor) j["anchor"] = *c.anchor;
  if (!c.matrices.empty()) {
    json ms = json::array();
    for (const Matrix& m : c.matrices) ms.push_back(matrix_to_json(m));
    j["matrices"] = std::move(ms);
  }
  if (c.check == CheckKind::ConvexPair) j["weight"] = c.weight;
  if (!c.grid.empty()) {
    json g = json::array();
    for (double v : c.grid) g.push_back(number_to_json(v));
    j["grid"] = std::move(g);
  }
  if (!c.values.empty()) j["values"] = c.values;
  return j;
}

Certificate certificate_from_json(const json& j) {
  try {
    Certificate c;
    c.check = parse_check(j.at("check").get<std::string>());
    if (j.contains("kind") && j["kind"].get<std::string>() != certificate_kind_name(c.kind()))
      fail(ErrorCode::Schema, "certificate kind does not match its check");
    c.function = j.at("function").get<std::string>();
    c.interval = interval_from_json(j.at("interval"));
    c.violation = j.at("violation").get<bool>();
    c.margin = number_from_json(j.at("margin"));
    c.scale = number_from_json(j.at("scale"));
    c.tolerance = number_from_json(j.at("tolerance"));
    if (j.contains("nodes")) c.nodes = j["nodes"].get<std::vector<double>>();
    if (j.contains("anchor")) c.anchor = j["anchor"].get<double>();
    if (j.contains("matrices"))
      for (const json& m : j["matrices"]) c.matrices.push_back(matrix_from_json(m));
    if (j.contains("weight")) c.weight = j["weight"].get<double>();
    if (j.contains("grid"))
      for (const json& v : j["grid"]) c.grid.push_back(number_from_json(v));
    if (j.contains("values")) c.values = j["values"].get<std::vector<double>>();
    return c;
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace matmono
