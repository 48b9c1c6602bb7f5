#include "theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "divdiff.hpp"
#include "errors.hpp"
#include "sampling.hpp"

namespace matmono {

const char* assertion_name(Assertion a) {
  switch (a) {
    case Assertion::IConvexF0: return "i_convex_f0";
    case Assertion::IiJensen: return "ii_jensen";
    case Assertion::IiiQuotientMonotone: return "iii_quotient_monotone";
    case Assertion::IvProjection: return "iv_projection";
    case Assertion::V3TwoContractions: return "v3_two_contractions";
  }
  return "?";
}

namespace {

using detail::ProblemPtr;

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) { return seed ^ (index * 0x9E3779B97F4A7C15ULL); }

Matrix spectrum_matrix(const std::vector<double>& nodes, Rng& rng) {
  const int n = static_cast<int>(nodes.size());
  const Matrix u = random_orthogonal(n, rng);
  const Vector t = Eigen::Map<const Vector>(nodes.data(), n);
  Matrix a = u * t.asDiagonal() * u.transpose();
  return 0.5 * (a + a.transpose());
}

// Spectrum in [0, alpha), sometimes with an exact zero eigenvalue.
Matrix psd_sample(const IntervalSpec& in, int n, Rng& rng) {
  std::vector<double> nodes = sample_nodes(in.interior_interval(), n, rng);
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.25) nodes[0] = 0.0;
  return spectrum_matrix(nodes, rng);
}

Certificate make(CheckKind check, const std::string& text, const IntervalSpec& in, std::vector<Matrix> ms) {
  Certificate c;
  c.check = check;
  c.function = text;
  c.interval = in;
  c.matrices = std::move(ms);
  return c;
}

ClassReport base_report(const std::string& property, const std::string& text, const IntervalSpec& in, int n,
                        Route route, int trials, std::uint64_t seed, double tol) {
  ClassReport r;
  r.property = property;
  r.function = text;
  r.interval = in;
  r.order = n;
  r.route = route;
  r.trials = trials;
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

ClassReport guarded(ClassReport report, const std::function<detail::SearchResult()>& body) {
  try {
    return detail::finish(std::move(report), body());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SamplerExhausted && e.code() != ErrorCode::UnsupportedOrder) throw;
    report.verdict = Verdict::Inconclusive;
    report.note = e.what();
    return report;
  }
}

ClassReport jensen_search(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, std::uint64_t seed,
                          double tol) {
  const std::string text = f.text();
  ClassReport report = base_report(assertion_name(Assertion::IiJensen), text, in, n, Route::JensenPairs, trials, seed, tol);
  return guarded(report, [&] {
    Rng rng(seed);
    const ProblemPtr generic = detail::jensen_problem(text, in, n);
    const ProblemPtr from_pair = detail::jensen_from_pair_problem(text, in, n);
    const IntervalSpec open = in.interior_interval();
    detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      if (i == 0) {
        // c = 0 tests f(0) <= 0.
        return std::make_pair(make(CheckKind::Jensen, text, in, {psd_sample(in, n, g), Matrix::Zero(n, n)}), generic);
      }
      switch (i % 4) {
        case 0:
        case 2: {
          // a <= b gives the contraction c = b^{-1/2} a^{1/2} with c*bc = a.
          auto [a, b] = random_ordered_pair(n, open, g);
          const Matrix c = detail::jensen_contraction(a.dense(), b.dense());
          return std::make_pair(make(CheckKind::Jensen, text, in, {b.dense(), c}), from_pair);
        }
        case 1:
          return std::make_pair(make(CheckKind::Jensen, text, in, {psd_sample(in, n, g), random_contraction(n, g)}),
                                generic);
        default: {
          // Range/kernel split: partial isometries and projections.
          const auto branch = std::uniform_int_distribution<int>(0, 1)(g) ? ContractionBranch::PartialIsometry
                                                                          : ContractionBranch::Projection;
          return std::make_pair(
              make(CheckKind::Jensen, text, in, {psd_sample(in, n, g), contraction_of_branch(n, branch, g)}), generic);
        }
      }
    };
    return detail::search(f, trials, sampler, tol, rng, 800);
  });
}

ClassReport projection_search(const FunctionSpec& f, const IntervalSpec& in, int n, int trials, std::uint64_t seed,
                              double tol) {
  const std::string text = f.text();
  ClassReport report =
      base_report(assertion_name(Assertion::IvProjection), text, in, n, Route::ProjectionPairs, trials, seed, tol);
  return guarded(report, [&] {
    Rng rng(seed);
    std::vector<ProblemPtr> problems;
    for (int r = 0; r <= n; ++r) problems.push_back(detail::projection_problem(text, in, n, r));
    detail::Sampler sampler = [&](int, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      const int rank = std::uniform_int_distribution<int>(0, n)(g);
      const Matrix q = random_orthogonal(n, g).leftCols(rank);
      Matrix p = q * q.transpose();
      p = 0.5 * (p + p.transpose());
      return std::make_pair(make(CheckKind::Projection, text, in, {psd_sample(in, n, g), p}), problems[rank]);
    };
    return detail::search(f, trials, sampler, tol, rng, 600);
  });
}

ClassReport two_contraction_search(const FunctionSpec& f, const IntervalSpec& in, int n, int trials,
                                   std::uint64_t seed, double tol) {
  const std::string text = f.text();
  ClassReport report = base_report(assertion_name(Assertion::V3TwoContractions), text, in, n, Route::TwoContractions,
                                   trials, seed, tol);
  return guarded(report, [&] {
    Rng rng(seed);
    const ProblemPtr problem = detail::two_contraction_problem(text, in, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    detail::Sampler sampler = [&](int i, Rng& g) -> std::optional<std::pair<Certificate, ProblemPtr>> {
      const Matrix a = psd_sample(in, n, g);
      const Matrix b = psd_sample(in, n, g);
      Matrix c, d;
      switch (i % 3) {
        case 0: {
          const double theta = 0.5 * M_PI * unit(g);
          c = std::cos(theta) * Matrix::Identity(n, n);
          d = std::sin(theta) * Matrix::Identity(n, n);
          break;
        }
        case 1: {
          const int rank = std::uniform_int_distribution<int>(0, n)(g);
          const Matrix q = random_orthogonal(n, g).leftCols(rank);
          c = q * q.transpose();
          d = Matrix::Identity(n, n) - c;
          break;
        }
        default: {
          const Matrix v = contraction_of_branch(2 * n, ContractionBranch::General, g).leftCols(n);
          c = v.topRows(n);
          d = v.bottomRows(n);
        }
      }
      return std::make_pair(make(CheckKind::TwoContraction, text, in, {a, b, c, d}), problem);
    };
    return detail::search(f, trials, sampler, tol, rng, 600);
  });
}

void require_alpha(const FunctionSpec& f, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  const IntervalSpec in = IntervalSpec::closed_open(0.0, alpha);
  if (!f.domain().covers_interior_of(in) || !f.domain().contains(0.0))
    fail(ErrorCode::Domain, f.text() + " is not defined on " + in.to_string());
}

bool decided(const ClassReport& r) { return r.verdict != Verdict::Inconclusive; }

std::string poly_text(const std::vector<double>& c) {
  std::string s = "poly:";
  char buf[40];
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", c[i]);
    s += (i ? "," : "") + std::string(buf);
  }
  return s;
}

double min_normalized_eig(const Matrix& m) {
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return ev.minCoeff() / std::max(1.0, ev.cwiseAbs().maxCoeff());
}

// Kraus search backed by the local 2x2 test, which sees violations the
// difference quotients only show at second order near the boundary.
ClassReport two_convex(const FunctionSpec& f, const IntervalSpec& in, int trials, std::uint64_t seed, double tol) {
  ClassReport kraus = is_n_convex(f, in, 2, trials, seed, tol, Route::KrausDd);
  if (kraus.verdict != Verdict::Pass) return kraus;
  ClassReport local = is_n_convex(f, in, 2, trials, seed, tol, Route::Local2x2);
  return local.verdict == Verdict::Pass ? kraus : local;
}

}  // namespace

ClassReport check_assertion(Assertion which, const FunctionSpec& f, double alpha, int n, int trials,
                            std::uint64_t seed, double tol) {
  require_alpha(f, alpha);
  if (n < 1) fail(ErrorCode::InvalidArgument, "order must be at least 1");
  const IntervalSpec closed = IntervalSpec::closed_open(0.0, alpha);
  const IntervalSpec open = IntervalSpec::open(0.0, alpha);
  switch (which) {
    case Assertion::IConvexF0: {
      const double f0 = f.eval(0.0);
      const double scale = std::max(1.0, std::abs(f0));
      if (-f0 < -tol * scale) {
        ClassReport r = base_report(assertion_name(which), f.text(), closed, n, Route::Scalar, 1, seed, tol);
        r.min_margin = -f0 / scale;
        if (-f0 / scale < -std::max(kFailMargin, tol)) {
          Certificate c;
          c.check = CheckKind::F0Nonpositive;
          c.function = f.text();
          c.interval = closed;
          c.nodes = {0.0};
          c.margin = -f0;
          c.scale = scale;
          c.tolerance = tol;
          r.verdict = Verdict::Fail;
          r.certificate = c;
          r.note = "f(0) > 0";
        } else {
          r.ambiguous = 1;
          r.note = "f(0) within rounding of 0";
        }
        if (r.verdict == Verdict::Fail) return r;
      }
      ClassReport r = is_n_convex(f, open, n, trials, seed, tol, Route::KrausDd);
      r.property = assertion_name(which);
      return r;
    }
    case Assertion::IiJensen: return jensen_search(f, closed, n, trials, seed, tol);
    case Assertion::IiiQuotientMonotone: {
      ClassReport r = is_n_monotone_dd(quotient_by_t(f), open, n, trials, seed, tol);
      r.property = assertion_name(which);
      return r;
    }
    case Assertion::IvProjection: return projection_search(f, closed, n, trials, seed, tol);
    case Assertion::V3TwoContractions: return two_contraction_search(f, closed, n, trials, seed, tol);
  }
  fail(ErrorCode::InvalidArgument, "unknown assertion");
}

std::vector<AssertionVerdict> check_assertions(const FunctionSpec& f, double alpha, int n, int trials,
                                               std::uint64_t seed, double tol) {
  std::vector<AssertionVerdict> out;
  for (Assertion a : {Assertion::IConvexF0, Assertion::IiJensen, Assertion::IiiQuotientMonotone,
                      Assertion::IvProjection, Assertion::V3TwoContractions})
    out.push_back({a, check_assertion(a, f, alpha, n, trials, seed, tol)});
  return out;
}

std::vector<double> constrained_quintic(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a1 = 2.0 * u(rng) - 1.0;
  const double a2 = u(rng);
  const double a4 = u(rng);
  const double a3 = (2.0 * u(rng) - 1.0) * std::sqrt(a2 * a4);
  const double a5 = 2.0 * u(rng) - 1.0;
  return {0.0, a1, a2, a3, a4, a5};
}

std::vector<CorpusEntry> default_corpus(std::uint64_t seed) {
  std::vector<std::string> texts = {
      "poly:0,1",
      "poly:0,0,1",
      "poly:0,0,0,1",
      "poly:0.5,2",
      "poly:-1,3",
      "compose(sqrt;moebius:1,0,-1,1)",
      "moebius:1,0,-1,1",
      "moebius:1,0,1,1",
      "gap:2",
      "gap:3",
      "gap:4",
      "poly:0,-1,2,-1",
      "compose(poly:0,-1;sqrt)",
  };
  Rng rng(seed);
  for (int k = 0; k < 2; ++k) texts.push_back(poly_text(constrained_quintic(rng)));
  std::vector<CorpusEntry> corpus;
  for (const auto& t : texts) corpus.push_back({t, parse_function(t)});
  return corpus;
}

SuiteSummary verify_equivalence_ii_iii(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                                       std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "thm31";
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& e = corpus[k];
    const std::uint64_t sd = mix(seed, k);
    ClassReport ii = check_assertion(Assertion::IiJensen, e.function, alpha, n, trials, sd, tol);
    ClassReport iii = check_assertion(Assertion::IiiQuotientMonotone, e.function, alpha, n, trials, sd, tol);
    ++s.instances;
    if (!decided(ii) || !decided(iii)) {
      ++s.skipped;
    } else if (ii.verdict != iii.verdict) {
      s.discrepancies.push_back({"thm31_equivalence", e.text, n,
                                 std::string("(ii) ") + verdict_name(ii.verdict) + " but (iii) " +
                                     verdict_name(iii.verdict),
                                 {ii, iii}});
    } else {
      ++s.holds;
    }
    s.reports.push_back(std::move(ii));
    s.reports.push_back(std::move(iii));
  }
  s.metrics["order"] = n;
  s.metrics["alpha"] = alpha;
  return s;
}

SuiteSummary verify_thm32_gap(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                              std::uint64_t seed, double tol) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "the gap implication needs order >= 2");
  SuiteSummary s;
  s.name = "thm32";
  const IntervalSpec open = IntervalSpec::open(0.0, alpha);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& e = corpus[k];
    const std::uint64_t sd = mix(seed, k);
    require_alpha(e.function, alpha);
    ++s.instances;
    const double f0 = e.function.eval(0.0);
    ClassReport convex = is_n_convex(e.function, open, n, trials, sd, tol, Route::KrausDd);
    ClassReport shifted = is_n_convex(FunctionSpec::shifted_to_zero(e.function), open, n, trials, sd, tol, Route::KrausDd);
    if (decided(convex) && decided(shifted) && convex.verdict != shifted.verdict)
      s.discrepancies.push_back({"lemma33_shift", e.text, n, "n-convexity of f and f - f(0) differ", {convex, shifted}});
    if (f0 > 0.0) {
      ++s.skipped;
      s.notes.push_back(e.text + ": f(0) > 0, hypothesis not met");
    } else if (convex.verdict != Verdict::Pass) {
      ++s.skipped;
      s.notes.push_back(e.text + ": not " + std::to_string(n) + "-convex, hypothesis not met");
    } else {
      ClassReport mono = is_n_monotone_dd(quotient_by_t(e.function), open, n - 1, trials, sd, tol);
      if (mono.verdict == Verdict::Fail)
        s.discrepancies.push_back({"thm32_implication", e.text, n,
                                   std::to_string(n) + "-convex with f(0) <= 0 but quotient not " +
                                       std::to_string(n - 1) + "-monotone",
                                   {convex, mono}});
      else
        ++s.holds;
      s.reports.push_back(std::move(mono));
    }
    s.reports.push_back(std::move(convex));
    s.reports.push_back(std::move(shifted));
  }
  s.metrics["order"] = n;
  s.metrics["alpha"] = alpha;
  return s;
}

SuiteSummary verify_prop35(int trials, std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "prop35";
  const FunctionSpec f = parse_function("poly:0,-1,2,-1");
  ClassReport iii = check_assertion(Assertion::IiiQuotientMonotone, f, 1.0, 1, trials, seed, tol);
  ClassReport i = check_assertion(Assertion::IConvexF0, f, 1.0, 1, trials, seed, tol);
  s.instances = 1;
  const bool split = iii.verdict == Verdict::Pass && i.verdict == Verdict::Fail;
  if (i.certificate && !i.certificate->nodes.empty()) {
    const double t = i.certificate->nodes[0];
    s.metrics["witness_t"] = t;
    s.metrics["witness_f2"] = f.derivative(t, 2);
  }
  if (split)
    ++s.holds;
  else
    s.discrepancies.push_back({"prop35_split", f.text(), 1,
                               std::string("expected (iii) PASS and (i) FAIL, got (iii) ") + verdict_name(iii.verdict) +
                                   " and (i) " + verdict_name(i.verdict),
                               {iii, i}});
  s.notes.push_back("tested on the open interval (0,1)");
  s.reports.push_back(std::move(iii));
  s.reports.push_back(std::move(i));
  return s;
}

SuiteSummary verify_prop36(int count, int trials, std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "prop36";
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int filtered = 0;
  std::vector<std::pair<std::vector<double>, double>> cases = {{{0, 1, 1, 0, 1}, 0.5}, {{0, 0, 1}, 0.5}};
  for (int k = 0; k < count; ++k) cases.push_back({constrained_quintic(rng), 0.05 + 0.55 * u(rng)});
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const FunctionSpec f = FunctionSpec::polynomial(cases[k].first);
    const IntervalSpec open = IntervalSpec::open(0.0, cases[k].second);
    const std::uint64_t sd = mix(seed, k);
    ++s.instances;
    ClassReport convex = two_convex(f, open, trials, sd, tol);
    if (convex.verdict != Verdict::Pass) {
      ++s.skipped;
      continue;
    }
    ++filtered;
    ClassReport mono = is_n_monotone_dd(quotient_by_t(f), open, 2, trials, sd, tol);
    if (mono.verdict == Verdict::Fail)
      s.discrepancies.push_back({"prop36_quotient", f.text(), 2, "2-convex quintic with quotient not 2-monotone",
                                 {convex, mono}});
    else
      ++s.holds;
    s.reports.push_back(std::move(mono));
  }
  s.metrics["generated"] = static_cast<double>(cases.size());
  s.metrics["filtered"] = filtered;
  s.metrics["failures"] = static_cast<double>(s.discrepancies.size());
  s.metrics["pass_rate"] = filtered ? static_cast<double>(s.holds) / filtered : 1.0;
  return s;
}

SuiteSummary verify_prop38(int count, int points, int trials, std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "prop38";
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::vector<double>, double>> fixed = {{{0, 0, 1}, 0.9}, {{0, 1, 1}, 0.9}};
  int accepted = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int attempt = 0; accepted < count && attempt < 20 * count + 2; ++attempt) {
    std::vector<double> coeffs;
    double alpha = 0.0;
    if (attempt < static_cast<int>(fixed.size())) {
      coeffs = fixed[attempt].first;
      alpha = fixed[attempt].second;
    } else {
      coeffs = constrained_quintic(rng);
      if (u(rng) < 0.5) coeffs[0] = -0.5 * u(rng);
      alpha = 0.1 + 0.5 * u(rng);
    }
    const FunctionSpec f = FunctionSpec::polynomial(coeffs);
    const IntervalSpec open = IntervalSpec::open(0.0, alpha);
    const std::uint64_t sd = mix(seed, attempt);
    ClassReport convex = two_convex(f, open, trials, sd, tol);
    if (coeffs[0] > 0.0 || convex.verdict != Verdict::Pass) {
      ++s.skipped;
      continue;
    }
    ++accepted;
    ++s.instances;
    const FunctionSpec g = quotient_by_t(f);
    const FunctionSpec big_g = antiderivative(g, 0.5 * alpha);
    ClassReport integral = is_n_convex(big_g, open, 2, trials, sd, tol, Route::KrausDd);
    bool ok = integral.verdict == Verdict::Pass;
    if (!ok)
      s.discrepancies.push_back({"prop38_integral", big_g.text(), 2, "integral of the quotient is not 2-convex",
                                 {convex, integral}});

    double local_worst = std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (int p = 0; p < points; ++p) {
      const double t = sample_interior(open, rng);
      const jet::Series gs = g.taylor(t, 3);  // g', g''/2, g'''/6 at 1..3
      const jet::Series fs = f.taylor(t, 4);
      const double g1 = gs[1], g2 = 2.0 * gs[2], g3 = 6.0 * gs[3];
      Matrix m(2, 2), d(2, 2), l(2, 2);
      m << t * t * g1 / 2, t * t * t * g2 / 6, t * t * t * g2 / 6, t * t * t * t * g3 / 24;
      // Derivative of m: t f''/2, t^2 f'''/6, t^3 f''''/24.
      d << t * fs[2], t * t * fs[3], t * t * fs[3], t * t * t * fs[4];
      l << g1 / 2, g2 / 6, g2 / 6, g3 / 24;
      for (const Matrix* x : {&m, &d, &l}) {
        const double e = min_normalized_eig(*x);
        if (e < local_worst) {
          local_worst = e;
          at = t;
        }
      }
    }
    worst = std::min(worst, local_worst);
    if (local_worst < -1e-8) {
      ok = false;
      char buf[96];
      std::snprintf(buf, sizeof buf, "intermediate matrix min eigenvalue %.3g at t = %.17g", local_worst, at);
      s.discrepancies.push_back({"prop38_intermediate", f.text(), 2, buf, {convex}});
    }
    if (ok) ++s.holds;
    s.reports.push_back(std::move(integral));
  }
  s.metrics["accepted"] = accepted;
  s.metrics["min_intermediate_eig"] = std::isfinite(worst) ? worst : 0.0;
  if (accepted < count) s.notes.push_back("only " + std::to_string(accepted) + " candidates met the hypothesis");
  return s;
}

SuiteSummary gap_search(int n, const BisectionConfig& grid, int trials, int subsets, std::uint64_t seed, double tol) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gap order must be positive");
  SuiteSummary s;
  s.name = "gap";
  s.metrics["order"] = n;
  const FunctionSpec f = gap_polynomial(n);
  if (n == 1) {
    s.skipped = 1;
    s.notes.push_back("order 1 is vacuous: x is operator monotone on every interval");
    s.reports.push_back(is_n_monotone_dd(f, IntervalSpec::open(0.0, grid.upper), 1, trials, seed, tol));
    return s;
  }

  auto probe = [&](double alpha) { return is_n_monotone_dd(f, IntervalSpec::open(0.0, alpha), n, trials, seed, tol); };
  ClassReport lo_report = probe(grid.lower);
  ClassReport hi_report = probe(grid.upper);
  s.instances = 3;
  if (lo_report.verdict != Verdict::Pass || hi_report.verdict != Verdict::Fail) {
    s.discrepancies.push_back({"gap_bracketing", f.text(), n, "bisection interval does not bracket the threshold",
                               {lo_report, hi_report}});
    s.reports.push_back(lo_report);
    s.reports.push_back(hi_report);
    return s;
  }
  double lo = grid.lower, hi = grid.upper;
  while (hi - lo > grid.resolution) {
    const double mid = 0.5 * (lo + hi);
    ClassReport r = probe(mid);
    if (r.verdict == Verdict::Pass) {
      lo = mid;
      lo_report = std::move(r);
    } else {
      hi = mid;
      hi_report = std::move(r);
    }
  }
  const double alpha = lo;
  s.metrics["alpha_hat"] = alpha;
  s.metrics["alpha_fail"] = hi;
  s.reports.push_back(lo_report);
  s.reports.push_back(hi_report);
  ++s.holds;

  ClassReport next = is_n_monotone_dd(f, IntervalSpec::open(0.0, alpha), n + 1, trials, seed, tol);
  if (next.verdict == Verdict::Fail) {
    ++s.holds;
    s.metrics["next_order_margin"] = next.certificate->margin / next.certificate->scale;
  } else {
    s.discrepancies.push_back({"gap_next_order", f.text(), n + 1,
                               "no (n+1)-monotonicity violation found at the bisected alpha", {next}});
  }
  s.reports.push_back(next);

  const IntervalSpec half_line = IntervalSpec::closed_open(0.0, std::numeric_limits<double>::infinity());
  const FunctionSpec moved =
      FunctionSpec::composition(f, transfer_map(half_line, IntervalSpec::closed_open(0.0, alpha)));
  ClassReport cn = cn_membership_sampled(moved, half_line, 2 * n, subsets, seed, kDefaultGridSize, kCnResidualTolerance);
  bool cn_ok = false;
  if (cn.verdict == Verdict::Fail && cn.certificate) {
    const MarginCheck m = recompute_margin(*cn.certificate);
    s.metrics["cn_dual_value"] = m.margin;
    cn_ok = m.hypothesis_ok && m.margin <= -kFailMargin;
  }
  s.metrics["cn_max_relative_residual"] = -cn.min_margin;
  if (cn_ok)
    ++s.holds;
  else
    s.discrepancies.push_back({"gap_cn_membership", moved.text(), 2 * n,
                               std::string("expected an infeasible interpolation at order 2n, got ") +
                                   verdict_name(cn.verdict),
                               {cn}});
  s.reports.push_back(cn);
  return s;
}

SuiteSummary verify_mathias_remark(int n, int trials, std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "mathias";
  const IntervalSpec half = IntervalSpec::open(0.0, std::numeric_limits<double>::infinity());
  const std::vector<std::string> members = {"sqrt", "moebius:1,0,1,1", "log"};
  for (std::size_t k = 0; k < members.size(); ++k) {
    const FunctionSpec f = parse_function(members[k]);
    const std::uint64_t sd = mix(seed, k);
    ++s.instances;
    ClassReport mono = is_n_monotone_dd(f, half, 2 * n, trials, sd, tol);
    if (mono.verdict != Verdict::Pass) {
      ++s.skipped;
      s.notes.push_back(members[k] + ": not " + std::to_string(2 * n) + "-monotone, hypothesis not met");
      s.reports.push_back(std::move(mono));
      continue;
    }
    ClassReport dd = is_n_concave(f, half, n, trials, sd, tol, Route::KrausDd);
    ClassReport mx = is_n_concave(f, half, n, trials, sd, tol, Route::MatrixPairs);
    if (dd.verdict == Verdict::Fail || mx.verdict == Verdict::Fail)
      s.discrepancies.push_back({"mathias_concavity", members[k], n, "2n-monotone on (0,inf) but not n-concave",
                                 {mono, dd, mx}});
    else
      ++s.holds;
    s.reports.push_back(std::move(mono));
    s.reports.push_back(std::move(dd));
    s.reports.push_back(std::move(mx));
  }

  // Finite interval: t + a t^2 + b t^3 + c t^4 with b > a^2 and c > b^2/a is
  // 2-monotone and 2-convex near 0, and not concave.
  ++s.instances;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool found = false;
  for (int attempt = 0; attempt < 50 && !found; ++attempt) {
    const double a = 0.2 + u(rng);
    const double b = a * a * (1.2 + u(rng));
    const double c = b * b / a * (1.2 + u(rng));
    const FunctionSpec f = FunctionSpec::polynomial({0.0, 1.0, a, b, c});
    const IntervalSpec small = IntervalSpec::open(0.0, 0.05);
    ClassReport mono = is_n_monotone_dd(f, small, 2, trials, seed, tol);
    ClassReport convex = is_n_convex(f, small, 2, trials, seed, tol, Route::KrausDd);
    if (mono.verdict != Verdict::Pass || convex.verdict != Verdict::Pass) continue;
    ClassReport concave = is_n_concave(f, small, 1, trials, seed, tol, Route::KrausDd);
    if (concave.verdict != Verdict::Fail) continue;
    found = true;
    ++s.holds;
    s.notes.push_back("finite-interval witness " + f.text() + " on " + small.to_string());
    s.reports.push_back(std::move(mono));
    s.reports.push_back(std::move(convex));
    s.reports.push_back(std::move(concave));
  }
  if (!found)
    s.discrepancies.push_back({"mathias_finite_witness", "", 2, "no 2-monotone and 2-convex polynomial found", {}});
  return s;
}

SuiteSummary verify_double_piling(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                                  std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "double_piling";
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& e = corpus[k];
    const std::uint64_t sd = mix(seed, k);
    ++s.instances;
    ClassReport i2n = check_assertion(Assertion::IConvexF0, e.function, alpha, 2 * n, trials, sd, tol);
    if (i2n.verdict != Verdict::Pass) {
      ++s.skipped;
      s.reports.push_back(std::move(i2n));
      continue;
    }
    ClassReport ii = check_assertion(Assertion::IiJensen, e.function, alpha, n, trials, sd, tol);
    if (ii.verdict == Verdict::Fail)
      s.discrepancies.push_back({"double_piling", e.text, n, "(i) at order 2n holds but (ii) at order n fails", {i2n, ii}});
    else
      ++s.holds;
    s.reports.push_back(std::move(i2n));
    s.reports.push_back(std::move(ii));
  }
  s.metrics["order"] = n;
  return s;
}

SuiteSummary verify_route_agreement(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                                    std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "corpus_routes";
  const IntervalSpec open = IntervalSpec::open(0.0, alpha);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& e = corpus[k];
    const std::uint64_t sd = mix(seed, k);
    ++s.instances;
    ClassReport dd = is_n_monotone_dd(e.function, open, n, trials, sd, tol);
    ClassReport mx = is_n_monotone_mx(e.function, open, n, trials, sd, tol);
    if (!decided(dd) || !decided(mx))
      ++s.skipped;
    else if (dd.verdict != mx.verdict)
      s.discrepancies.push_back({"route_agreement", e.text, n,
                                 std::string("loewner_dd ") + verdict_name(dd.verdict) + " but matrix_pairs " +
                                     verdict_name(mx.verdict),
                                 {dd, mx}});
    else
      ++s.holds;
    s.reports.push_back(std::move(dd));
    s.reports.push_back(std::move(mx));
  }
  s.metrics["order"] = n;
  return s;
}

SuiteSummary verify_cn_sanity(int trials, std::uint64_t seed, double tol) {
  SuiteSummary s;
  s.name = "cn_sanity";
  const IntervalSpec unit = IntervalSpec::open(0.0, 1.0);
  const std::vector<double> points = {0.3, 0.6};
  const std::vector<double> grid = kernel_grid(kDefaultGridSize);

  // Exact atomic measures: lambda = 1/2 k(lambda, 1), 1 = k(lambda, inf).
  struct Atom {
    const char* text;
    std::size_t index;
    double weight;
  };
  for (const Atom& atom : {Atom{"poly:0,1", kDefaultGridSize / 2, 0.5}, Atom{"poly:1", kDefaultGridSize, 1.0}}) {
    ++s.instances;
    const FunctionSpec f = parse_function(atom.text);
    ClassReport fit = cn_membership(f, unit, 2, points, kDefaultGridSize, kCnResidualTolerance);
    Certificate exact;
    exact.check = CheckKind::CnMeasure;
    exact.function = atom.text;
    exact.interval = unit;
    exact.nodes = points;
    exact.grid = grid;
    exact.values.assign(grid.size(), 0.0);
    exact.values[atom.index] = atom.weight;
    exact.tolerance = 1e-10;
    exact.violation = false;
    const MarginCheck m = recompute_margin(exact);
    exact.margin = m.margin;
    const double residual = exact.tolerance * std::sqrt(f.eval(0.3) * f.eval(0.3) + f.eval(0.6) * f.eval(0.6)) - m.margin;
    s.metrics[std::string("atomic_residual ") + atom.text] = residual;
    if (fit.verdict == Verdict::Pass && recheck(exact) && residual <= 1e-10)
      ++s.holds;
    else
      s.discrepancies.push_back({"cn_exact_measure", atom.text, 2, "exact atomic measure not confirmed", {fit}});
    s.reports.push_back(std::move(fit));
  }

  for (const char* text : {"poly:0,1", "moebius:1,0,-1,1"}) {
    ++s.instances;
    ClassReport op = cn_operator_check(parse_function(text), 2, trials, seed, tol);
    if (op.verdict == Verdict::Pass)
      ++s.holds;
    else
      s.discrepancies.push_back({"cn_operator", text, 2,
                                 std::string("T*AT <= A but T*f(A)T <= f(A) fails: ") + verdict_name(op.verdict),
                                 {op}});
    s.reports.push_back(std::move(op));
  }
  return s;
}

}  // namespace matmono
