// One PASS/FAIL line per check; exits 1 if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "classifiers.hpp"
#include "divdiff.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "theorems.hpp"

using namespace matmono;

namespace {

constexpr double kTol = 1e-9;
constexpr double kFailDet = -1e-6;
constexpr double kIntermediateEig = -1e-8;
constexpr double kAtomResidual = 1e-10;
constexpr double kDualColumn = -1e-7;
constexpr double kDualValue = -1e-6;
constexpr double kPermutationRel = 1e-10;
constexpr double kCoincidenceAbs = 1e-6;
constexpr double kCoincidenceEps = 1e-7;
constexpr double kKrausIdentity = 1e-10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string discrepancy_kinds(const SuiteSummary& s) {
  std::string out;
  for (const auto& d : s.discrepancies) out += (out.empty() ? "" : ",") + d.kind + "[" + d.function + "]";
  return out;
}

const IntervalSpec kUnit = IntervalSpec::open(0.0, 1.0);

Outcome loewner_sanity() {
  Outcome o;
  const FunctionSpec sqrt_f = parse_function("sqrt");
  for (int n = 1; n <= 4; ++n) {
    const ClassReport r = is_n_monotone_dd(sqrt_f, kUnit, n, 1000, 1, kTol);
    require(o, r.verdict == Verdict::Pass && r.min_margin >= -kTol, "sqrt fails at n=" + std::to_string(n));
  }
  const FunctionSpec sq = parse_function("poly:0,0,1");
  const ClassReport r = is_n_monotone_dd(sq, kUnit, 2, 1000, 1, kTol);
  require(o, r.verdict == Verdict::Fail && r.certificate.has_value(), "t^2 not rejected at n=2");
  if (r.certificate) {
    const double det = loewner_matrix(sq, r.certificate->nodes).entries.determinant();
    require(o, det <= kFailDet, "t^2 determinant " + num(det));
    o.detail += o.pass ? "t^2 det " + num(det) : "";
  }
  return o;
}

Outcome kraus_sanity() {
  Outcome o;
  const FunctionSpec sq = parse_function("poly:0,0,1");
  for (int n = 1; n <= 4; ++n)
    require(o, is_n_convex(sq, kUnit, n, 1000, 1, kTol, Route::KrausDd).verdict == Verdict::Pass,
            "t^2 fails at n=" + std::to_string(n));
  const ClassReport r = is_n_convex(parse_function("poly:0,0,0,1"), kUnit, 2, 1000, 1, kTol, Route::KrausDd);
  require(o, r.verdict == Verdict::Fail && r.certificate.has_value(), "t^3 not rejected at n=2");
  if (r.certificate) {
    const MarginCheck m = recompute_margin(*r.certificate);
    require(o, m.margin <= kFailDet, "t^3 margin " + num(m.margin));
    if (o.pass) o.detail = "t^3 margin " + num(m.margin);
  }
  return o;
}

Outcome equivalence() {
  Outcome o;
  const auto corpus = default_corpus(1);
  require(o, corpus.size() >= 10, "corpus too small");
  int instances = 0;
  for (int n = 1; n <= 3; ++n) {
    const SuiteSummary s = verify_equivalence_ii_iii(corpus, 1.0, n, 2000, 1, kTol);
    instances += s.instances;
    require(o, s.discrepancies.empty(), "n=" + std::to_string(n) + ": " + discrepancy_kinds(s));
  }
  if (o.pass) o.detail = std::to_string(instances) + " comparisons";
  return o;
}

Outcome cubic_counterexample() {
  Outcome o;
  const SuiteSummary s = verify_prop35(1000, 1, kTol);
  require(o, s.discrepancies.empty() && s.holds == 1, discrepancy_kinds(s));
  const auto it = s.metrics.find("witness_f2");
  require(o, it != s.metrics.end() && it->second < -1e-6, "no point with f'' < -1e-6");
  if (o.pass) o.detail = "f''(" + num(s.metrics.at("witness_t")) + ") = " + num(it->second);
  return o;
}

Outcome quintics() {
  Outcome o;
  const SuiteSummary s = verify_prop36(500, 1000, 1, kTol);
  require(o, s.discrepancies.empty(), std::to_string(s.discrepancies.size()) + " failures");
  require(o, s.metrics.at("filtered") > 0, "no quintic passed the filter");
  o.detail += (o.detail.empty() ? "" : "; ") + num(s.metrics.at("filtered")) + " of " +
              num(s.metrics.at("generated")) + " kept";
  return o;
}

Outcome integral() {
  Outcome o;
  const SuiteSummary s = verify_prop38(100, 100, 1000, 1, kTol);
  require(o, s.instances == 100, "only " + std::to_string(s.instances) + " functions");
  require(o, s.discrepancies.empty(), discrepancy_kinds(s));
  const double worst = s.metrics.at("min_intermediate_eig");
  require(o, worst >= kIntermediateEig, "min eigenvalue " + num(worst));
  if (o.pass) o.detail = "min intermediate eigenvalue " + num(worst);
  return o;
}

Outcome convex_implies_quotient() {
  Outcome o;
  const auto corpus = default_corpus(1);
  for (int n = 2; n <= 3; ++n) {
    const SuiteSummary s = verify_thm32_gap(corpus, 1.0, n, 2000, 1, kTol);
    require(o, s.discrepancies.empty(), "n=" + std::to_string(n) + ": " + discrepancy_kinds(s));
  }
  return o;
}

Outcome gap() {
  Outcome o;
  for (int n = 2; n <= 3; ++n) {
    const SuiteSummary s = gap_search(n, BisectionConfig{}, 2000, 200, 1, kTol);
    const std::string tag = "n=" + std::to_string(n) + " ";
    require(o, s.metrics.count("alpha_hat") && s.metrics.at("alpha_hat") > 0.0, tag + "no alpha");
    for (const auto& d : s.discrepancies) require(o, false, tag + d.kind + ": " + d.detail);
    // Re-check the stored dual independently.
    bool dual_found = false;
    for (const auto& r : s.reports) {
      if (!r.certificate || r.certificate->check != CheckKind::CnDual) continue;
      const Certificate& c = *r.certificate;
      const FunctionSpec f = parse_function(c.function);
      double value = 0.0, col = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < c.nodes.size(); ++i) value += c.values[i] * f.eval(c.nodes[i]);
      for (double t : c.grid) {
        double s_col = 0.0;
        for (std::size_t i = 0; i < c.nodes.size(); ++i) s_col += c.values[i] * pick_kernel(c.nodes[i], t);
        col = std::min(col, s_col);
      }
      dual_found = dual_found || (col >= kDualColumn && value <= kDualValue);
    }
    require(o, dual_found, tag + "no dual certificate with a^T f(S) <= -1e-6");
    o.detail += (o.detail.empty() ? "" : "; ") + tag + "alpha " + num(s.metrics.count("alpha_hat") ? s.metrics.at("alpha_hat") : 0) +
                " next-order margin " + num(s.metrics.count("next_order_margin") ? s.metrics.at("next_order_margin") : 0) +
                " residual " + num(s.metrics.count("cn_max_relative_residual") ? s.metrics.at("cn_max_relative_residual") : 0);
  }
  return o;
}

Outcome cn_sanity() {
  Outcome o;
  const SuiteSummary s = verify_cn_sanity(2000, 1, kTol);
  for (const auto& [k, v] : s.metrics)
    if (k.rfind("atomic_residual", 0) == 0) require(o, v <= kAtomResidual, k + " " + num(v));
  require(o, s.discrepancies.empty(), discrepancy_kinds(s));
  return o;
}

Outcome route_oracle() {
  Outcome o;
  Rng rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> degree(1, 5);
  int disagreements = 0;
  std::string first;
  for (int k = 0; k < 200; ++k) {
    std::vector<double> c(degree(rng) + 1);
    for (double& v : c) v = u(rng);
    const FunctionSpec f = FunctionSpec::polynomial(c);
    for (int n = 1; n <= 2; ++n) {
      const ClassReport dd = is_n_monotone_dd(f, kUnit, n, 1000, k, kTol);
      const ClassReport mx = is_n_monotone_mx(f, kUnit, n, 1000, k, kTol);
      if (dd.verdict != mx.verdict) {
        ++disagreements;
        if (first.empty()) first = f.text() + " n=" + std::to_string(n);
      }
    }
  }
  require(o, disagreements == 0, std::to_string(disagreements) + " disagreements, first " + first);
  return o;
}

Outcome infrastructure() {
  Outcome o;
  Rng rng(11);
  const std::vector<FunctionSpec> fs = {parse_function("sqrt"), parse_function("log"), parse_function("exp"),
                                        parse_function("moebius:1,0,-1,1"), gap_polynomial(3)};
  const IntervalSpec in = IntervalSpec::open(0.05, 0.95);
  double perm_worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const FunctionSpec& f = fs[k % fs.size()];
    std::vector<double> nodes = sample_nodes(in, 2 + k % 5, rng);
    const double ref = divided_difference(f, nodes);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    perm_worst = std::max(perm_worst, std::abs(divided_difference(f, nodes) - ref) / std::max(1.0, std::abs(ref)));
  }
  require(o, perm_worst <= kPermutationRel, "permutation error " + num(perm_worst));

  double coin_worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const FunctionSpec& f = fs[k % fs.size()];
    const double t = sample_interior(IntervalSpec::open(0.1, 0.8), rng);
    const std::vector<double> nodes = {t, t + kCoincidenceEps};
    const double d1 = f.derivative(t, 1);
    coin_worst = std::max(coin_worst, std::abs(divided_difference(f, nodes) - d1) / std::max(1.0, std::abs(d1)));
  }
  require(o, coin_worst <= kCoincidenceAbs, "coincidence error " + num(coin_worst));

  double kraus_worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const FunctionSpec& f = fs[k % fs.size()];
    const std::vector<double> r = sample_nodes(IntervalSpec::open(0.1, 0.9), 2, rng);
    const double s = sample_interior(IntervalSpec::open(0.1, 0.9), rng);
    if (std::abs(r[0] - r[1]) < 0.05 || std::abs(r[0] - s) < 0.05 || std::abs(r[1] - s) < 0.05) continue;
    auto h = [&](double t) { return (f.eval(t) - f.eval(s)) / (t - s); };
    const double want = (h(r[0]) - h(r[1])) / (r[0] - r[1]);
    const double got = kraus_matrix(f, r, s).entries(0, 1);
    kraus_worst = std::max(kraus_worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
  }
  require(o, kraus_worst <= kKrausIdentity, "Kraus identity error " + num(kraus_worst));

  RunConfig c;
  c.command = Command::Jensen;
  c.function = "gap:2";
  c.trials = 200;
  auto bytes = [&] {
    nlohmann::json j = to_json(run(c));
    j.erase("timestamp");
    return j.dump(2);
  };
  require(o, bytes() == bytes(), "reports differ between identical runs");
  if (o.pass)
    o.detail = "perm " + num(perm_worst) + ", coincidence " + num(coin_worst) + ", kraus " + num(kraus_worst);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "loewner criterion sanity", 10, loewner_sanity},
      {2, "kraus criterion sanity", 10, kraus_sanity},
      {3, "jensen and quotient monotonicity agree", 300, equivalence},
      {4, "cubic with monotone quotient is not convex", 1, cubic_counterexample},
      {5, "constrained quintics have 2-monotone quotient", 120, quintics},
      {6, "integral of the quotient stays 2-convex", 120, integral},
      {7, "n-convexity implies (n-1)-monotone quotient", 120, convex_implies_quotient},
      {8, "gap polynomials", 300, gap},
      {9, "interpolation class sanity", 60, cn_sanity},
      {10, "dd and matrix-pair routes agree", 180, route_oracle},
      {11, "infrastructure properties", 60, infrastructure},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) require(o, false, "took " + num(secs) + " s, budget " + num(c.budget_seconds) + " s");
    failed += !o.pass;
    std::printf("%-4s %2d %-48s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
