#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "classifiers.hpp"

namespace matmono {

enum class Assertion { IConvexF0, IiJensen, IiiQuotientMonotone, IvProjection, V3TwoContractions };

const char* assertion_name(Assertion a);

/// One level-n assertion for f on [0, alpha); the report's property is the assertion name.
struct AssertionVerdict {
  Assertion assertion = Assertion::IConvexF0;
  ClassReport report;

  bool operator==(const AssertionVerdict&) const = default;
};

/// (i) f(0) <= 0 and n-convex; (ii) f(c*ac) <= c*f(a)c; (iii) f(t)/t n-monotone
/// on (0, alpha); (iv) projections only; (v3) f(c*ac + d*bd) <= c*f(a)c + d*f(b)d.
std::vector<AssertionVerdict> check_assertions(const FunctionSpec& f, double alpha, int n, int trials,
                                               std::uint64_t seed, double tol);

ClassReport check_assertion(Assertion which, const FunctionSpec& f, double alpha, int n, int trials,
                            std::uint64_t seed, double tol);

struct Discrepancy {
  std::string kind;
  std::string function;
  int order = 0;
  std::string detail;
  std::vector<ClassReport> evidence;

  bool operator==(const Discrepancy&) const = default;
};

struct SuiteSummary {
  std::string name;
  int instances = 0;
  int holds = 0;
  int skipped = 0;
  std::vector<ClassReport> reports;
  std::vector<Discrepancy> discrepancies;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;

  bool operator==(const SuiteSummary&) const = default;
};

struct CorpusEntry {
  std::string text;
  FunctionSpec function;
};

/// Default functions on [0,1) spanning both sides of every implication checked.
std::vector<CorpusEntry> default_corpus(std::uint64_t seed);

/// verdict(ii) == verdict(iii) for each member.
SuiteSummary verify_equivalence_ii_iii(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                                       std::uint64_t seed, double tol);

/// (i) => f(t)/t is (n-1)-monotone; plus n-convexity of f and f - f(0) agree.
SuiteSummary verify_thm32_gap(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                              std::uint64_t seed, double tol);

/// -t^3 + 2t^2 - t on (0,1): quotient 1-monotone, f not convex.
SuiteSummary verify_prop35(int trials, std::uint64_t seed, double tol);

/// Random quintics with a2, a4 >= 0, a2 a4 >= a3^2, f(0) = 0, kept when 2-convex;
/// each must have a 2-monotone quotient.
SuiteSummary verify_prop36(int count, int trials, std::uint64_t seed, double tol);

/// For 2-convex f with f(0) <= 0: G = integral of f(t)/t is 2-convex, and the
/// intermediate 2x2 matrices are PSD at `points` sampled t.
SuiteSummary verify_prop38(int count, int points, int trials, std::uint64_t seed, double tol);

struct BisectionConfig {
  double lower = 0.05;
  double upper = 1.5;
  double resolution = 1e-3;
};

/// Gap polynomial of order n: bisected alpha, (n+1)-monotone failure at alpha,
/// and C_{2n} membership of its transfer to [0, inf).
SuiteSummary gap_search(int n, const BisectionConfig& grid, int trials, int subsets, std::uint64_t seed, double tol);

/// 2n-monotone functions on (0, inf) are n-concave; a finite-interval
/// polynomial that is 2-monotone and 2-convex (hence not concave).
SuiteSummary verify_mathias_remark(int n, int trials, std::uint64_t seed, double tol);

/// (i) at order 2n implies (ii) at order n, over the corpus.
SuiteSummary verify_double_piling(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                                  std::uint64_t seed, double tol);

/// Loewner route and matrix-pair route agree over the corpus.
SuiteSummary verify_route_agreement(const std::vector<CorpusEntry>& corpus, double alpha, int n, int trials,
                                    std::uint64_t seed, double tol);

/// lambda and 1 are exactly representable; the operator form for the kernel at t = 0.
SuiteSummary verify_cn_sanity(int trials, std::uint64_t seed, double tol);

/// Quintic a1 t + ... + a5 t^5 satisfying the coefficient conditions above.
std::vector<double> constrained_quintic(Rng& rng);

}  // namespace matmono
