#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "certificate.hpp"
#include "funcmodel.hpp"
#include "interval.hpp"

namespace matmono {

enum class Verdict { Pass, Fail, Inconclusive };

enum class Route {
  LoewnerDd,
  MatrixPairs,
  KrausDd,
  Local2x2,
  CnFeasibility,
  CnOperator,
  JensenPairs,
  ProjectionPairs,
  TwoContractions,
  Scalar,
};

const char* verdict_name(Verdict v);
Verdict parse_verdict(const std::string& name);
const char* route_name(Route r);
Route parse_route(const std::string& name);

/// Polished normalized margin a violation must reach before it is reported as FAIL.
inline constexpr double kFailMargin = 1e-6;
/// At most this many candidates are polished per run; later ones only count as ambiguous.
inline constexpr int kMaxPolished = 12;

struct ClassReport {
  std::string property;
  std::string function;
  IntervalSpec interval = IntervalSpec::open(0.0, 1.0);
  int order = 1;
  Verdict verdict = Verdict::Pass;
  Route route = Route::LoewnerDd;
  int trials = 0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  /// Smallest margin/scale over all evaluated samples (after polishing on FAIL).
  double min_margin = 0.0;
  /// Candidates below -tolerance that polishing could not push below -kFailMargin.
  int ambiguous = 0;
  std::string note;
  std::optional<Certificate> certificate;

  bool operator==(const ClassReport&) const = default;
};

/// Loewner matrices over `trials` random n-tuples plus stress tuples.
ClassReport is_n_monotone_dd(const FunctionSpec& f, const IntervalSpec& interval, int n, int trials,
                             std::uint64_t seed, double tol);

/// f(a) <= f(b) over sampled ordered pairs a <= b of dimension n.
ClassReport is_n_monotone_mx(const FunctionSpec& f, const IntervalSpec& interval, int n, int trials,
                             std::uint64_t seed, double tol);

/// Route KrausDd, MatrixPairs or Local2x2 (n = 2 only).
ClassReport is_n_convex(const FunctionSpec& f, const IntervalSpec& interval, int n, int trials, std::uint64_t seed,
                        double tol, Route route);

/// n-concavity, i.e. n-convexity of -f.
ClassReport is_n_concave(const FunctionSpec& f, const IntervalSpec& interval, int n, int trials, std::uint64_t seed,
                         double tol, Route route);

inline constexpr int kDefaultGridSize = 256;
inline constexpr double kCnResidualTolerance = 1e-7;

/// Interpolation by a positive Pick-type kernel measure at the points S of
/// `interval` (mapped increasingly onto (0,1)). tol is relative to |f(S)|.
ClassReport cn_membership(const FunctionSpec& f, const IntervalSpec& interval, int n, const std::vector<double>& points,
                          int grid_size, double tol);

/// cn_membership over `subsets` sampled n-point sets plus a local search from the
/// worst one; reports the largest relative residual found.
ClassReport cn_membership_sampled(const FunctionSpec& f, const IntervalSpec& interval, int n, int subsets,
                                  std::uint64_t seed, int grid_size, double tol);

/// T*AT <= A  =>  T*f(A)T <= f(A), for n x n A with spectrum in (0,1).
ClassReport cn_operator_check(const FunctionSpec& f, int n, int trials, std::uint64_t seed, double tol);

namespace detail {

/// Sampled certificate together with the parameter map used to polish it.
struct Problem {
  std::function<std::vector<double>(const Certificate&)> encode;
  std::function<std::optional<Certificate>(const std::vector<double>&)> decode;
  /// Typical step per parameter.
  std::vector<double> step;
  /// Scale each step by max(1, |parameter|) (nodes on half lines).
  bool relative = false;
};

using ProblemPtr = std::shared_ptr<const Problem>;

struct Scored {
  Certificate cert;
  double normalized = 0.0;
};

std::optional<Scored> score(const FunctionSpec& f, const Certificate& cert);

/// Local search pushing the normalized margin down; keeps the best feasible point.
Scored polish(const FunctionSpec& f, const Problem& problem, const Scored& start, Rng& rng, int budget);

/// Shared trial loop: evaluates samples in order, polishes candidates, stops at
/// the first polished violation.
struct SearchResult {
  std::optional<Certificate> failure;
  double min_margin = 0.0;
  int ambiguous = 0;
  int evaluated = 0;
};

using Sampler = std::function<std::optional<std::pair<Certificate, ProblemPtr>>(int index, Rng& rng)>;

SearchResult search(const FunctionSpec& f, int count, const Sampler& sampler, double tol, Rng& rng, int budget);

ProblemPtr node_problem(const std::string& function, const IntervalSpec& interval, int count, CheckKind check,
                        int anchor_index);
ProblemPtr monotone_pair_problem(const std::string& function, const IntervalSpec& interval, int n);
/// Diagonal a and b = a + s^2 W W^T, parameterized by nodes, log s and W.
ProblemPtr spectral_pair_problem(const std::string& function, const IntervalSpec& interval, int n);
ProblemPtr convex_pair_problem(const std::string& function, const IntervalSpec& interval, int n);
ProblemPtr jensen_problem(const std::string& function, const IntervalSpec& interval, int n);
/// Jensen pair built as (b, b^{-1/2} a^{1/2}) from an ordered pair a <= b.
ProblemPtr jensen_from_pair_problem(const std::string& function, const IntervalSpec& interval, int n);
ProblemPtr projection_problem(const std::string& function, const IntervalSpec& interval, int n, int rank);
ProblemPtr two_contraction_problem(const std::string& function, const IntervalSpec& interval, int n);
ProblemPtr cn_operator_problem(const std::string& function, int n);

/// Largest beta in [0,1] with beta^2 T*AT <= A (bisection).
double contraction_shrink(const Matrix& a, const Matrix& t);
/// c = b^{-1/2} a^{1/2} scaled into the unit ball; requires 0 < a <= b.
Matrix jensen_contraction(const Matrix& a, const Matrix& b);

ClassReport finish(ClassReport report, const SearchResult& result);

}  // namespace detail

}  // namespace matmono
