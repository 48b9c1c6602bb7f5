#include <doctest.h>

#include "theorems.hpp"

using namespace matmono;

TEST_CASE("assertions for the square and the cube") {
  const auto sq = check_assertions(parse_function("poly:0,0,1"), 1.0, 2, 200, 1, 1e-9);
  REQUIRE(sq.size() == 5);
  for (const auto& a : sq) {
    INFO(assertion_name(a.assertion));
    CHECK(a.report.verdict == Verdict::Pass);
    CHECK(a.report.property == assertion_name(a.assertion));
  }
  const FunctionSpec cube = parse_function("poly:0,0,0,1");
  const ClassReport ii = check_assertion(Assertion::IiJensen, cube, 1.0, 2, 400, 1, 1e-9);
  const ClassReport iii = check_assertion(Assertion::IiiQuotientMonotone, cube, 1.0, 2, 400, 1, 1e-9);
  CHECK(ii.verdict == Verdict::Fail);
  CHECK(iii.verdict == Verdict::Fail);
  REQUIRE(ii.certificate);
  CHECK(recheck(*ii.certificate));
}

TEST_CASE("positive constant term fails (i) with a scalar certificate") {
  const ClassReport r = check_assertion(Assertion::IConvexF0, parse_function("poly:0.5,0,1"), 1.0, 1, 50, 1, 1e-9);
  REQUIRE(r.verdict == Verdict::Fail);
  REQUIRE(r.certificate);
  CHECK(r.certificate->check == CheckKind::F0Nonpositive);
  CHECK(recheck(*r.certificate));
}

TEST_CASE("empty corpus gives an empty summary") {
  const SuiteSummary s = verify_equivalence_ii_iii({}, 1.0, 2, 10, 1, 1e-9);
  CHECK(s.instances == 0);
  CHECK(s.discrepancies.empty());
}

TEST_CASE("equivalence of (ii) and (iii) on a small corpus") {
  std::vector<CorpusEntry> corpus;
  for (const char* t : {"poly:0,0,1", "poly:0,0,0,1", "poly:-1,0,1", "moebius:1,0,-1,2"})
    corpus.push_back({t, parse_function(t)});
  const SuiteSummary s = verify_equivalence_ii_iii(corpus, 1.0, 2, 300, 2, 1e-9);
  CHECK(s.instances == 4);
  CHECK(s.discrepancies.empty());
}

TEST_CASE("cubic counterexample to the converse") {
  const SuiteSummary s = verify_prop35(500, 1, 1e-9);
  CHECK(s.holds == 1);
  CHECK(s.discrepancies.empty());
}

TEST_CASE("quotient of constrained quintics") {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto c = constrained_quintic(rng);
    REQUIRE(c.size() == 6);
    CHECK(c[0] == 0.0);
    CHECK(c[2] >= 0.0);
    CHECK(c[4] >= 0.0);
    CHECK(c[2] * c[4] >= c[3] * c[3] - 1e-15);
  }
  const SuiteSummary s = verify_prop36(20, 200, 3, 1e-9);
  CHECK(s.discrepancies.empty());
  CHECK(s.instances == 22);
}

TEST_CASE("integral of the quotient") {
  const SuiteSummary s = verify_prop38(8, 30, 200, 5, 1e-9);
  CHECK(s.discrepancies.empty());
  CHECK(s.holds == s.instances);
  CHECK(s.instances == 8);
}

TEST_CASE("gap polynomial of order 2") {
  const SuiteSummary s = gap_search(2, BisectionConfig{}, 500, 20, 1, 1e-9);
  CHECK(s.metrics.count("alpha_hat") == 1);
  CHECK(s.metrics.at("alpha_hat") > 0.5);
  CHECK(s.metrics.at("alpha_hat") < 1.0);
  for (const auto& d : s.discrepancies) CHECK(d.kind != "gap_bracketing");
  for (const auto& d : s.discrepancies) CHECK(d.kind != "gap_next_order");
  CHECK_THROWS(verify_thm32_gap({}, 1.0, 1, 10, 1, 1e-9));
}

TEST_CASE("concavity of functions monotone on the half line") {
  const SuiteSummary s = verify_mathias_remark(2, 300, 1, 1e-9);
  CHECK(s.discrepancies.empty());
}

TEST_CASE("default corpus") {
  const auto c = default_corpus(1);
  CHECK(c.size() >= 10);
  CHECK(default_corpus(1).size() == c.size());
  for (const auto& e : c) CHECK(parse_function(e.text).text() == e.function.text());
}
