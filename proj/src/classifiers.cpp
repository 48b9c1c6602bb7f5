#include "classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divdiff.hpp"
#include "errors.hpp"
#include "nnls.hpp"
#include "sampling.hpp"

namespace matmono {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Verdict parse_verdict(const std::string& name) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Inconclusive})
    if (name == verdict_name(v)) return v;
  fail(ErrorCode::Schema, "unknown verdict '" + name + "'");
}

const char* route_name(Route r) {
  switch (r) {
    case Route::LoewnerDd: return "loewner_dd";
    case Route::MatrixPairs: return "matrix_pairs";
    case Route::KrausDd: return "kraus_dd";
    case Route::Local2x2: return "local2x2";
    case Route::CnFeasibility: return "cn_feasibility";
    case Route::CnOperator: return "cn_operator";
    case Route::JensenPairs: return "jensen_pairs";
    case Route::ProjectionPairs: return "projection_pairs";
    case Route::TwoContractions: return "two_contractions";
    case Route::Scalar: return "scalar";
  }
  return "?";
}

Route parse_route(const std::string& name) {
  for (int r = 0; r <= static_cast<int>(Route::Scalar); ++r)
    if (name == route_name(static_cast<Route>(r))) return static_cast<Route>(r);
  fail(ErrorCode::InvalidArgument, "unknown route '" + name + "'");
}

namespace detail {

namespace {

void put_sym(std::vector<double>& p, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j) p.push_back(m(i, j));
}

Matrix take_sym(const std::vector<double>& p, std::size_t& k, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = p[k++];
  return m;
}

void put_full(std::vector<double>& p, const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) p.push_back(m(i, j));
}

Matrix take_full(const std::vector<double>& p, std::size_t& k, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = p[k++];
  return m;
}

std::vector<double> steps(std::size_t count, double value) { return std::vector<double>(count, value); }

Vector eigenvalues(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

bool spectrum_in(const Matrix& m, const IntervalSpec& in, bool strict) {
  if (!m.allFinite()) return false;
  for (double v : eigenvalues(m))
    if (strict ? !in.interior(v) : !in.contains(v)) return false;
  return true;
}

// Symmetric PSD square root, negative eigenvalues clipped.
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  const Vector r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

Certificate base(const std::string& function, const IntervalSpec& in, CheckKind check) {
  Certificate c;
  c.check = check;
  c.function = function;
  c.interval = in;
  return c;
}

Matrix unit_ball(const Matrix& c) {
  const double norm = operator_norm(c);
  return norm > 1.0 ? Matrix(c / norm) : c;
}

}  // namespace

std::optional<Scored> score(const FunctionSpec& f, const Certificate& cert) {
  MarginCheck m;
  try {
    m = evaluate_certificate(f, cert);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedOrder || e.code() == ErrorCode::SamplerExhausted) throw;
    return std::nullopt;
  }
  if (!m.hypothesis_ok || !std::isfinite(m.margin)) return std::nullopt;
  Scored s{cert, m.margin / m.scale};
  s.cert.margin = m.margin;
  s.cert.scale = m.scale;
  return s;
}

Scored polish(const FunctionSpec& f, const Problem& problem, const Scored& start, Rng& rng, int budget) {
  Scored best = start;
  std::vector<double> theta = problem.encode(start.cert);
  if (theta.empty()) return best;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sigma = 1.0;
  int misses = 0;
  for (int e = 0; e < budget && sigma > 1e-9; ++e) {
    std::vector<double> trial = theta;
    auto step_of = [&](std::size_t i) {
      const double s = problem.step[i] * sigma;
      return problem.relative ? s * std::max(1.0, std::abs(theta[i])) : s;
    };
    if (unit(rng) < 0.5) {
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, theta.size() - 1)(rng);
      trial[i] += step_of(i) * gauss(rng);
    } else {
      for (std::size_t i = 0; i < theta.size(); ++i) trial[i] += step_of(i) * gauss(rng);
    }
    std::optional<Scored> s;
    if (auto cert = problem.decode(trial)) s = score(f, *cert);
    if (s && s->normalized < best.normalized) {
      best = *s;
      theta = std::move(trial);
      misses = 0;
      sigma = std::min(1.0, sigma * 1.25);
    } else if (++misses >= 24) {
      sigma *= 0.5;
      misses = 0;
    }
  }
  return best;
}

SearchResult search(const FunctionSpec& f, int count, const Sampler& sampler, double tol, Rng& rng, int budget) {
  SearchResult r;
  r.min_margin = std::numeric_limits<double>::infinity();
  int polished = 0;
  const double threshold = std::max(kFailMargin, tol);
  for (int i = 0; i < count; ++i) {
    auto sample = sampler(i, rng);
    if (!sample) continue;
    auto s = score(f, sample->first);
    if (!s) continue;
    ++r.evaluated;
    r.min_margin = std::min(r.min_margin, s->normalized);
    if (!(s->normalized < -tol)) continue;
    if (polished < kMaxPolished && sample->second) {
      ++polished;
      Scored p = polish(f, *sample->second, *s, rng, budget);
      r.min_margin = std::min(r.min_margin, p.normalized);
      if (p.normalized < -threshold) {
        p.cert.tolerance = tol;
        r.failure = p.cert;
        return r;
      }
    }
    ++r.ambiguous;
  }
  if (r.evaluated == 0) r.min_margin = 0.0;
  return r;
}

ClassReport finish(ClassReport report, const SearchResult& result) {
  report.min_margin = result.min_margin;
  report.ambiguous = result.ambiguous;
  if (result.failure) {
    report.verdict = Verdict::Fail;
    report.certificate = result.failure;
  } else {
    report.verdict = Verdict::Pass;
  }
  if (result.ambiguous > 0) {
    if (!report.note.empty()) report.note += "; ";
    report.note += std::to_string(result.ambiguous) + " candidate(s) within rounding of the boundary";
  }
  return report;
}

ProblemPtr node_problem(const std::string& function, const IntervalSpec& in, int count, CheckKind check,
                        int anchor_index) {
  auto p = std::make_shared<Problem>();
  p->encode = [](const Certificate& c) { return c.nodes; };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    Certificate c = base(function, in, check);
    c.nodes.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (!std::isfinite(theta[i])) return std::nullopt;
      c.nodes[i] = clamp_interior(in, theta[i]);
    }
    if (check == CheckKind::Kraus) c.anchor = c.nodes[anchor_index];
    return c;
  };
  p->step = steps(count, 0.05 * in.scale());
  p->relative = !in.finite();
  return p;
}

ProblemPtr monotone_pair_problem(const std::string& function, const IntervalSpec& in, int n) {
  auto p = std::make_shared<Problem>();
  p->encode = [](const Certificate& c) {
    std::vector<double> theta;
    put_sym(theta, c.matrices[0]);
    put_full(theta, psd_sqrt(c.matrices[1] - c.matrices[0]));
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    const Matrix g = take_full(theta, k, n, n);
    const Matrix b = a + g * g.transpose();
    if (!spectrum_in(a, in, true) || !spectrum_in(b, in, true)) return std::nullopt;
    Certificate c = base(function, in, CheckKind::MonotonePair);
    c.matrices = {a, b};
    return c;
  };
  const std::size_t ns = n * (n + 1) / 2;
  p->step = steps(ns, 0.02 * in.scale());
  const auto g = steps(n * n, 0.05 * std::sqrt(in.scale()));
  p->step.insert(p->step.end(), g.begin(), g.end());
  return p;
}

ProblemPtr spectral_pair_problem(const std::string& function, const IntervalSpec& in, int n) {
  auto p = std::make_shared<Problem>();
  p->encode = [n](const Certificate& c) {
    std::vector<double> theta(c.matrices[0].diagonal().data(), c.matrices[0].diagonal().data() + n);
    const Matrix g = psd_sqrt(c.matrices[1] - c.matrices[0]);
    const double s = std::max(g.norm(), 1e-300);
    theta.push_back(std::log(s));
    put_full(theta, g / s);
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    for (double v : theta)
      if (!std::isfinite(v)) return std::nullopt;
    Vector nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = clamp_interior(in, theta[i]);
    std::size_t k = n + 1;
    const Matrix g = std::exp(theta[n]) * take_full(theta, k, n, n);
    const Matrix a = nodes.asDiagonal();
    const Matrix b = a + g * g.transpose();
    if (!spectrum_in(b, in, true)) return std::nullopt;
    Certificate c = base(function, in, CheckKind::MonotonePair);
    c.matrices = {a, b};
    return c;
  };
  p->step = steps(n, 0.05 * in.scale());
  p->step.push_back(1.0);
  const auto w = steps(n * n, 0.2);
  p->step.insert(p->step.end(), w.begin(), w.end());
  return p;
}

ProblemPtr convex_pair_problem(const std::string& function, const IntervalSpec& in, int n) {
  auto p = std::make_shared<Problem>();
  p->encode = [](const Certificate& c) {
    std::vector<double> theta;
    put_sym(theta, c.matrices[0]);
    put_sym(theta, c.matrices[1]);
    const double w = std::clamp(c.weight, 1e-12, 1.0 - 1e-12);
    theta.push_back(std::log(w / (1.0 - w)));
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    const Matrix b = take_sym(theta, k, n);
    if (!spectrum_in(a, in, true) || !spectrum_in(b, in, true)) return std::nullopt;
    Certificate c = base(function, in, CheckKind::ConvexPair);
    c.matrices = {a, b};
    c.weight = 1.0 / (1.0 + std::exp(-theta[k]));
    return c;
  };
  p->step = steps(n * (n + 1), 0.02 * in.scale());
  p->step.push_back(0.3);
  return p;
}

ProblemPtr jensen_problem(const std::string& function, const IntervalSpec& in, int n) {
  auto p = std::make_shared<Problem>();
  p->encode = [](const Certificate& c) {
    std::vector<double> theta;
    put_sym(theta, c.matrices[0]);
    put_full(theta, c.matrices[1]);
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    const Matrix c = unit_ball(take_full(theta, k, n, n));
    if (!spectrum_in(a, in, false)) return std::nullopt;
    Certificate cert = base(function, in, CheckKind::Jensen);
    cert.matrices = {a, c};
    return cert;
  };
  p->step = steps(n * (n + 1) / 2, 0.02 * in.scale());
  const auto s = steps(n * n, 0.05);
  p->step.insert(p->step.end(), s.begin(), s.end());
  return p;
}

Matrix jensen_contraction(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.transpose()));
  const Vector inv = es.eigenvalues().cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
  const Matrix b_inv_half = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  return unit_ball(b_inv_half * psd_sqrt(a));
}

ProblemPtr jensen_from_pair_problem(const std::string& function, const IntervalSpec& in, int n) {
  auto p = std::make_shared<Problem>();
  const IntervalSpec open = in.interior_interval();
  p->encode = [](const Certificate& c) {
    const Matrix& b = c.matrices[0];
    const Matrix& k = c.matrices[1];
    const Matrix a = 0.5 * (k.transpose() * b * k + (k.transpose() * b * k).transpose());
    std::vector<double> theta;
    put_sym(theta, a);
    put_full(theta, psd_sqrt(b - a));
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    const Matrix g = take_full(theta, k, n, n);
    const Matrix b = a + g * g.transpose();
    if (!spectrum_in(a, open, true) || !spectrum_in(b, open, true)) return std::nullopt;
    Certificate c = base(function, in, CheckKind::Jensen);
    c.matrices = {b, jensen_contraction(a, b)};
    return c;
  };
  p->step = steps(n * (n + 1) / 2, 0.02 * in.scale());
  const auto g = steps(n * n, 0.05 * std::sqrt(in.scale()));
  p->step.insert(p->step.end(), g.begin(), g.end());
  return p;
}

ProblemPtr projection_problem(const std::string& function, const IntervalSpec& in, int n, int rank) {
  auto p = std::make_shared<Problem>();
  p->encode = [=](const Certificate& c) {
    std::vector<double> theta;
    put_sym(theta, c.matrices[0]);
    if (rank > 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(c.matrices[1]);
      put_full(theta, es.eigenvectors().rightCols(rank));
    }
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    if (!spectrum_in(a, in, false)) return std::nullopt;
    Matrix proj = Matrix::Zero(n, n);
    if (rank > 0) {
      const Matrix q = take_full(theta, k, n, rank);
      Eigen::HouseholderQR<Matrix> qr(q);
      const Matrix basis = qr.householderQ() * Matrix::Identity(n, rank);
      proj = basis * basis.transpose();
      proj = 0.5 * (proj + proj.transpose());
    }
    Certificate c = base(function, in, CheckKind::Projection);
    c.matrices = {a, proj};
    return c;
  };
  p->step = steps(n * (n + 1) / 2, 0.02 * in.scale());
  const auto s = steps(n * rank, 0.1);
  p->step.insert(p->step.end(), s.begin(), s.end());
  return p;
}

ProblemPtr two_contraction_problem(const std::string& function, const IntervalSpec& in, int n) {
  auto p = std::make_shared<Problem>();
  p->encode = [](const Certificate& c) {
    std::vector<double> theta;
    put_sym(theta, c.matrices[0]);
    put_sym(theta, c.matrices[1]);
    put_full(theta, c.matrices[2]);
    put_full(theta, c.matrices[3]);
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    const Matrix b = take_sym(theta, k, n);
    Matrix stacked(2 * n, n);
    stacked.topRows(n) = take_full(theta, k, n, n);
    stacked.bottomRows(n) = take_full(theta, k, n, n);
    stacked = unit_ball(stacked);
    if (!spectrum_in(a, in, false) || !spectrum_in(b, in, false)) return std::nullopt;
    Certificate c = base(function, in, CheckKind::TwoContraction);
    c.matrices = {a, b, stacked.topRows(n), stacked.bottomRows(n)};
    return c;
  };
  p->step = steps(n * (n + 1), 0.02 * in.scale());
  const auto s = steps(2 * n * n, 0.05);
  p->step.insert(p->step.end(), s.begin(), s.end());
  return p;
}

double contraction_shrink(const Matrix& a, const Matrix& t) {
  const Matrix tat = t.transpose() * a * t;
  auto feasible = [&](double beta) {
    const Matrix d = a - beta * beta * tat;
    return eigenvalues(0.5 * (d + d.transpose()))(0) >= 0.0;
  };
  if (feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

ProblemPtr cn_operator_problem(const std::string& function, int n) {
  auto p = std::make_shared<Problem>();
  const IntervalSpec unit = IntervalSpec::open(0.0, 1.0);
  p->encode = [](const Certificate& c) {
    std::vector<double> theta;
    put_sym(theta, c.matrices[0]);
    put_full(theta, c.matrices[1]);
    return theta;
  };
  p->decode = [=](const std::vector<double>& theta) -> std::optional<Certificate> {
    std::size_t k = 0;
    const Matrix a = take_sym(theta, k, n);
    if (!spectrum_in(a, unit, true)) return std::nullopt;
    const Matrix t0 = unit_ball(take_full(theta, k, n, n));
    Certificate c = base(function, unit, CheckKind::CnOperator);
    c.matrices = {a, contraction_shrink(a, t0) * t0};
    return c;
  };
  p->step = steps(n * (n + 1) / 2, 0.02);
  const auto s = steps(n * n, 0.05);
  p->step.insert(p->step.end(), s.begin(), s.end());
  return p;
}

}  // namespace detail

namespace {

using detail::ProblemPtr;
using detail::SearchResult;

void check_common(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, double tol) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "order must be at least 1");
  if (trials < 0) fail(ErrorCode::InvalidArgument, "trials must be nonnegative");
  if (!(tol >= 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  if (!f.domain().covers_interior_of(in))
    fail(ErrorCode::Domain, "interval " + in.to_string() + " is not inside the domain " + f.domain().to_string() +
                                " of " + f.text());
}

ClassReport make_report(const std::string& property, const FunctionSpec& f, const IntervalSpec& in, int n,
                        Route route, int trials, std::uint64_t seed, double tol) {
  ClassReport r;
  r.property = property;
  r.function = f.text();
  r.interval = in;
  r.order = n;
  r.route = route;
  r.trials = trials;
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

// Runs the search and turns sampler exhaustion / missing derivatives into INCONCLUSIVE.
ClassReport run(ClassReport report, const std::function<SearchResult()>& body) {
  try {
    return detail::finish(std::move(report), body());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SamplerExhausted && e.code() != ErrorCode::UnsupportedOrder) throw;
    report.verdict = Verdict::Inconclusive;
    report.note = e.what();
    return report;
  }
}

Matrix random_spectrum_matrix(const std::vector<double>& nodes, Rng& rng) {
  const int n = static_cast<int>(nodes.size());
  const Matrix u = random_orthogonal(n, rng);
  const Vector t = Eigen::Map<const Vector>(nodes.data(), n);
  Matrix a = u * t.asDiagonal() * u.transpose();
  return 0.5 * (a + a.transpose());
}

std::vector<double> node_sample(const IntervalSpec& in, int n, int index,
                                const std::vector<std::vector<double>>& stress, Rng& rng) {
  if (index < static_cast<int>(stress.size())) return stress[index];
  return sample_nodes(in, n, rng);
}

}  // namespace

ClassReport is_n_monotone_dd(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, std::uint64_t seed,
                             double tol) {
  check_common(f, in, n, trials, tol);
  ClassReport report = make_report("monotone", f, in, n, Route::LoewnerDd, trials, seed, tol);
  const std::string text = report.function;
  return run(report, [&] {
    Rng rng(seed);
    const auto stress = stress_tuples(in, n, rng);
    const ProblemPtr problem = detail::node_problem(text, in, n, CheckKind::Loewner, 0);
    detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      Certificate c;
      c.check = CheckKind::Loewner;
      c.function = text;
      c.interval = in;
      c.nodes = node_sample(in, n, i, stress, g);
      return std::make_pair(std::move(c), problem);
    };
    return detail::search(f, static_cast<int>(stress.size()) + trials, sampler, tol, rng, 1500);
  });
}

ClassReport is_n_monotone_mx(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, std::uint64_t seed,
                             double tol) {
  check_common(f, in, n, trials, tol);
  ClassReport report = make_report("monotone", f, in, n, Route::MatrixPairs, trials, seed, tol);
  const std::string text = report.function;
  return run(report, [&] {
    Rng rng(seed);
    const ProblemPtr problem = detail::monotone_pair_problem(text, in, n);
    const ProblemPtr spectral = detail::spectral_pair_problem(text, in, n);
    const auto stress = stress_tuples(in, n, rng);
    detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      Certificate c;
      c.check = CheckKind::MonotonePair;
      c.function = text;
      c.interval = in;
      if (i % 2 == 0) {
        auto [a, b] = random_ordered_pair(n, in, g);
        c.matrices = {a.dense(), b.dense()};
        return std::make_pair(std::move(c), problem);
      }
      // Diagonal a plus a small rank-one step with full support: to first order
      // f(b) - f(a) is congruent to the Loewner matrix at the diagonal.
      const std::vector<double> nodes = node_sample(in, n, i / 2, stress, g);
      Vector w(n);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int k = 0; k < n; ++k) w[k] = 0.1 + std::abs(gauss(g));
      const Matrix a = Eigen::Map<const Vector>(nodes.data(), n).asDiagonal();
      double eps = std::pow(10.0, std::uniform_real_distribution<double>(-6.0, -1.0)(g)) * in.scale();
      for (int tries = 0; tries < 40; ++tries, eps *= 0.5) {
        const Matrix b = a + eps * (w * w.transpose()) / w.squaredNorm();
        if (detail::spectrum_in(b, in, true)) {
          c.matrices = {a, b};
          return std::make_pair(std::move(c), spectral);
        }
      }
      return std::nullopt;
    };
    return detail::search(f, trials, sampler, tol, rng, 800);
  });
}

ClassReport is_n_convex(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, std::uint64_t seed,
                        double tol, Route route) {
  check_common(f, in, n, trials, tol);
  if (route == Route::Local2x2 && n != 2)
    fail(ErrorCode::InvalidArgument, "route local2x2 applies to order 2 only, got order " + std::to_string(n));
  if (route != Route::KrausDd && route != Route::MatrixPairs && route != Route::Local2x2)
    fail(ErrorCode::InvalidArgument, std::string("route ") + route_name(route) + " does not decide convexity");
  ClassReport report = make_report("convex", f, in, n, route, trials, seed, tol);
  const std::string text = report.function;

  if (route == Route::KrausDd) {
    return run(report, [&] {
      Rng rng(seed);
      const auto stress = stress_tuples(in, n, rng);
      std::vector<ProblemPtr> problems;
      for (int k = 0; k < n; ++k) problems.push_back(detail::node_problem(text, in, n, CheckKind::Kraus, k));
      detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
        const auto nodes = node_sample(in, n, i, stress, g);
        // The anchor runs over the nodes; keep the worst one.
        std::optional<std::pair<Certificate, ProblemPtr>> worst;
        double worst_margin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
          Certificate c;
          c.check = CheckKind::Kraus;
          c.function = text;
          c.interval = in;
          c.nodes = nodes;
          c.anchor = nodes[k];
          const auto s = detail::score(f, c);
          const double m = s ? s->normalized : std::numeric_limits<double>::infinity();
          if (!worst || m < worst_margin) {
            worst_margin = m;
            worst = std::make_pair(std::move(c), problems[k]);
          }
        }
        return worst;
      };
      return detail::search(f, static_cast<int>(stress.size()) + trials, sampler, tol, rng, 1500);
    });
  }

  if (route == Route::Local2x2) {
    return run(report, [&] {
      Rng rng(seed);
      std::vector<double> points;
      for (const auto& t : stress_tuples(in, 2, rng)) points.insert(points.end(), t.begin(), t.end());
      const ProblemPtr problem = detail::node_problem(text, in, 1, CheckKind::LocalConvex, 0);
      detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
        Certificate c;
        c.check = CheckKind::LocalConvex;
        c.function = text;
        c.interval = in;
        c.nodes = {i < static_cast<int>(points.size()) ? points[i] : sample_interior(in, g)};
        return std::make_pair(std::move(c), problem);
      };
      return detail::search(f, static_cast<int>(points.size()) + trials, sampler, tol, rng, 600);
    });
  }

  return run(report, [&] {
    Rng rng(seed);
    const ProblemPtr problem = detail::convex_pair_problem(text, in, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    detail::Sampler sampler = [&](int, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      const Matrix a = random_spectrum_matrix(sample_nodes(in, n, g), g);
      Matrix b;
      if (unit(g) < 0.3) {
        // Nearby pair: convexity defects are second order in |b - a|.
        for (int attempt = 0; attempt < 100; ++attempt) {
          Matrix h = random_spectrum_matrix(sample_nodes(IntervalSpec::open(-1.0, 1.0), n, g), g);
          const double eps = in.scale() * std::pow(10.0, -3.0 + 2.5 * unit(g));
          b = a + eps * h;
          if (detail::spectrum_in(b, in, true)) break;
          b.resize(0, 0);
        }
        if (b.size() == 0) return std::nullopt;
      } else {
        b = random_spectrum_matrix(sample_nodes(in, n, g), g);
      }
      Certificate c;
      c.check = CheckKind::ConvexPair;
      c.function = text;
      c.interval = in;
      c.matrices = {a, b};
      c.weight = unit(g);
      return std::make_pair(std::move(c), problem);
    };
    return detail::search(f, trials, sampler, tol, rng, 800);
  });
}

ClassReport is_n_concave(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, std::uint64_t seed,
                         double tol, Route route) {
  const FunctionSpec negated = FunctionSpec::composition(FunctionSpec::polynomial({0.0, -1.0}), f);
  ClassReport r = is_n_convex(negated, in, n, trials, seed, tol, route);
  r.property = "concave";
  r.note = r.note.empty() ? "convexity of " + r.function : "convexity of " + r.function + "; " + r.note;
  r.function = f.text();
  return r;
}

namespace {

constexpr int kMaxGeneratedColumns = 60;
// A dual value above this everywhere counts as nonnegative.
constexpr double kDualSlack = 1e-12;

// Minimum over t in [0, inf] of sum_i a_i k(lambda_i, t): scan in u = t/(1+t),
// then golden-section refinement around the best cell.
std::pair<double, double> dual_minimum(const std::vector<double>& lambdas, const Vector& a) {
  auto value = [&](double u) {
    const double t = u >= 1.0 ? std::numeric_limits<double>::infinity() : u / (1.0 - u);
    double v = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) v += a[i] * pick_kernel(lambdas[i], t);
    return v;
  };
  constexpr int kScan = 4096;
  int best = 0;
  double best_v = value(0.0);
  for (int j = 1; j <= kScan; ++j) {
    const double v = value(static_cast<double>(j) / kScan);
    if (v < best_v) {
      best_v = v;
      best = j;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(kScan);
  double hi = std::min(kScan, best + 1) / static_cast<double>(kScan);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double v1 = value(x1), v2 = value(x2);
  for (int it = 0; it < 80; ++it) {
    if (v1 < v2) {
      hi = x2;
      x2 = x1;
      v2 = v1;
      x1 = hi - g * (hi - lo);
      v1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      v1 = v2;
      x2 = lo + g * (hi - lo);
      v2 = value(x2);
    }
  }
  double u = v1 < v2 ? x1 : x2;
  double v = std::min(v1, v2);
  if (best_v <= v) {
    u = static_cast<double>(best) / kScan;
    v = best_v;
  }
  return {u >= 1.0 ? std::numeric_limits<double>::infinity() : u / (1.0 - u), v};
}

ClassReport cn_fit(const FunctionSpec& f, const std::string& text, const IntervalSpec& in, int n,
                   const std::vector<double>& points, const std::vector<double>& grid, int grid_size, double tol) {
  ClassReport r;
  r.property = "cn";
  r.function = text;
  r.interval = in;
  r.order = n;
  r.route = Route::CnFeasibility;
  r.trials = 1;
  r.tolerance = tol;

  const std::vector<double> lambdas = to_unit_interval(in, points);
  Vector y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    y[i] = f.eval(points[i]);
    if (!(y[i] > 0.0)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "f(%.17g) = %.17g is not positive", points[i], y[i]);
      fail(ErrorCode::Domain, buf);
    }
  }
  // Column generation: while the dual dips below zero between grid points, add
  // the minimizing kernel parameter and refit.
  std::vector<double> columns = grid;
  NnlsResult fit;
  double rnorm = 0.0;
  const double ynorm = y.norm();
  int added = 0;
  for (;;) {
    fit = nnls(kernel_matrix(lambdas, columns), y);
    rnorm = fit.residual.norm();
    if (rnorm <= tol * ynorm || added >= kMaxGeneratedColumns) break;
    const Vector a = -fit.residual / rnorm;
    const auto [t_min, value] = dual_minimum(lambdas, a);
    if (value >= -kDualSlack || std::find(columns.begin(), columns.end(), t_min) != columns.end()) break;
    columns.insert(std::upper_bound(columns.begin(), columns.end() - 1, t_min), t_min);
    ++added;
  }
  r.min_margin = -rnorm / ynorm;

  Certificate c;
  c.function = text;
  c.interval = in;
  c.nodes = points;
  c.grid = columns;
  if (rnorm <= tol * ynorm) {
    c.check = CheckKind::CnMeasure;
    c.violation = false;
    c.values.assign(fit.x.data(), fit.x.data() + fit.x.size());
    c.tolerance = tol;
    c.margin = tol * ynorm - rnorm;
    r.verdict = Verdict::Pass;
  } else {
    c.check = CheckKind::CnDual;
    c.violation = true;
    const Vector a = -fit.residual / rnorm;
    c.values.assign(a.data(), a.data() + a.size());
    c.tolerance = tol * ynorm;
    c.margin = a.dot(y);
    r.verdict = Verdict::Fail;
  }
  const MarginCheck m = evaluate_certificate(f, c);
  c.margin = m.margin;
  c.scale = m.scale;
  if (!m.hypothesis_ok) {
    r.verdict = Verdict::Inconclusive;
    r.note = "certificate did not verify: " + m.detail;
  }
  if (!fit.converged) r.note += (r.note.empty() ? "" : "; ") + std::string("nnls iteration limit reached");
  r.note += (r.note.empty() ? "" : "; ") + ("grid size " + std::to_string(grid_size));
  if (added) r.note += " + " + std::to_string(added) + " generated columns";
  r.certificate = c;
  return r;
}

void check_points(const IntervalSpec& in, int n, std::vector<double>& points) {
  if (static_cast<int>(points.size()) != n)
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " points, got " + std::to_string(points.size()));
  std::sort(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!in.interior(points[i])) fail(ErrorCode::Domain, "point not interior to " + in.to_string());
    if (i > 0 && points[i] == points[i - 1]) fail(ErrorCode::InvalidArgument, "points must be distinct");
  }
}

}  // namespace

ClassReport cn_membership(const FunctionSpec& f, const IntervalSpec& in, int n, const std::vector<double>& points,
                          int grid_size, double tol) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "order must be at least 1");
  if (!(tol >= 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  std::vector<double> s = points;
  check_points(in, n, s);
  return cn_fit(f, f.text(), in, n, s, kernel_grid(grid_size), grid_size, tol);
}

ClassReport cn_membership_sampled(const FunctionSpec& f, const IntervalSpec& in, int n, int subsets,
                                  std::uint64_t seed, int grid_size, double tol) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "order must be at least 1");
  if (subsets < 1) fail(ErrorCode::InvalidArgument, "need at least one subset");
  if (!f.domain().covers_interior_of(in))
    fail(ErrorCode::Domain, "interval " + in.to_string() + " is not inside the domain of " + f.text());
  const std::string text = f.text();
  const std::vector<double> grid = kernel_grid(grid_size);
  Rng rng(seed);

  auto draw = [&]() {
    for (;;) {
      std::vector<double> s = sample_nodes(in, n, rng);
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) == s.end()) return s;
    }
  };
  auto finish = [&](ClassReport r, double worst, const std::string& extra) {
    r.trials = subsets;
    r.seed = seed;
    r.min_margin = std::min(r.min_margin, -worst);
    if (!extra.empty()) r.note += "; " + extra;
    return r;
  };

  ClassReport worst_report;
  std::vector<double> worst_points;
  double worst = -1.0;
  for (int i = 0; i < subsets; ++i) {
    std::vector<double> s = draw();
    ClassReport r = cn_fit(f, text, in, n, s, grid, grid_size, tol);
    const double rel = -r.min_margin;
    if (rel > worst) {
      worst = rel;
      worst_report = r;
      worst_points = s;
    }
  }

  // Local search from the least well fitted subset, widening any infeasibility.
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sigma = 0.05;
  int misses = 0;
  for (int e = 0; e < 400 && sigma > 1e-8; ++e) {
    std::vector<double> s = worst_points;
    for (double& t : s) t = clamp_interior(in, t + sigma * std::max(in.scale(), in.finite() ? 0.0 : std::abs(t)) * gauss(rng));
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
    ClassReport r;
    try {
      r = cn_fit(f, text, in, n, s, grid, grid_size, tol);
    } catch (const Error&) {
      continue;
    }
    const double rel = -r.min_margin;
    if (rel > worst && r.verdict != Verdict::Inconclusive) {
      worst = rel;
      worst_report = r;
      worst_points = s;
      misses = 0;
    } else if (++misses >= 20) {
      sigma *= 0.5;
      misses = 0;
    }
  }
  return finish(worst_report, worst, "largest relative residual over subsets");
}

ClassReport cn_operator_check(const FunctionSpec& f, int n, int trials, std::uint64_t seed, double tol) {
  const IntervalSpec unit = IntervalSpec::open(0.0, 1.0);
  check_common(f, unit, n, trials, tol);
  ClassReport report = make_report("cn_operator", f, unit, n, Route::CnOperator, trials, seed, tol);
  const std::string text = report.function;
  return run(report, [&] {
    Rng rng(seed);
    const ProblemPtr problem = detail::cn_operator_problem(text, n);
    const auto stress = stress_tuples(unit, n, rng);
    detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      const std::size_t pick = static_cast<std::size_t>(i) % (stress.size() * 4);
      const std::vector<double> nodes = pick < stress.size() ? stress[pick] : sample_nodes(unit, n, g);
      const Matrix a = random_spectrum_matrix(nodes, g);
      const Matrix t0 = random_contraction(n, g);
      Certificate c;
      c.check = CheckKind::CnOperator;
      c.function = text;
      c.interval = unit;
      c.matrices = {a, detail::contraction_shrink(a, t0) * t0};
      return std::make_pair(std::move(c), problem);
    };
    return detail::search(f, trials, sampler, tol, rng, 600);
  });
}

}  // namespace matmono
