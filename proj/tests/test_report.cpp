#include <doctest.h>

#include <limits>

#include "errors.hpp"
#include "report.hpp"

using namespace matmono;
using nlohmann::json;

namespace {

ClassReport random_report(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 3);
  ClassReport r;
  r.property = "monotone";
  r.function = "poly:0," + std::to_string(pick(rng)) + ",1";
  r.interval = IntervalSpec::closed_open(u(rng) - 2, 2 + u(rng));
  r.order = 1 + pick(rng);
  r.verdict = static_cast<Verdict>(pick(rng) % 3);
  r.route = static_cast<Route>(pick(rng));
  r.trials = 10 * pick(rng);
  r.tolerance = 1e-9;
  r.seed = rng();
  r.min_margin = pick(rng) == 0 ? -std::numeric_limits<double>::infinity() : u(rng);
  r.ambiguous = pick(rng);
  r.note = pick(rng) == 0 ? "a \"quoted\", note" : "";
  if (pick(rng) % 2) {
    Certificate c;
    c.check = CheckKind::MonotonePair;
    c.function = r.function;
    c.interval = r.interval;
    Matrix a = Matrix::Random(2, 2);
    c.matrices = {a + a.transpose(), Matrix::Identity(2, 2) * 3};
    c.nodes = {u(rng), u(rng)};
    c.anchor = u(rng);
    c.grid = {0.5, std::numeric_limits<double>::infinity()};
    c.values = {u(rng)};
    c.margin = u(rng);
    c.scale = 1 + u(rng) * u(rng);
    c.tolerance = 1e-9;
    r.certificate = c;
  }
  return r;
}

Report strip_time(Report r) {
  r.timestamp.clear();
  r.wall_clock = 0.0;
  return r;
}

}  // namespace

TEST_CASE("report JSON round trip") {
  Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const ClassReport r = random_report(rng);
    CHECK(class_report_from_json(json::parse(report_to_json(r).dump())) == r);
  }
  SuiteSummary s;
  s.name = "x";
  s.instances = 3;
  s.holds = 2;
  s.skipped = 1;
  s.reports = {random_report(rng)};
  s.discrepancies = {{"route_agreement", "sqrt", 2, "detail", {random_report(rng)}}};
  s.metrics["m"] = 0.25;
  s.notes = {"n"};
  CHECK(summary_from_json(json::parse(summary_to_json(s).dump())) == s);
}

TEST_CASE("runs are reproducible apart from the timestamp") {
  RunConfig c;
  c.command = Command::Classify;
  c.function = "gap:2";
  c.trials = 300;
  const Report a = run(c);
  const Report b = run(c);
  CHECK(strip_time(a) == strip_time(b));
  const Report back = report_from_json(to_json(a));
  CHECK(strip_time(back) == strip_time(a));
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(exit_code(a) == 0);
}

TEST_CASE("schema and config errors") {
  json j = to_json(Report{});
  j["schema"] = "v0";
  CHECK_THROWS_AS(report_from_json(j), Error);
  CHECK_THROWS_AS(config_from_json(json::array()), Error);
  CHECK_THROWS_AS(config_from_json(json{{"command", "nope"}}), Error);
  RunConfig c;
  c.command = Command::Classify;
  CHECK_THROWS_AS(validate(c), Error);
  c.function = "sqrt";
  c.order = 0;
  CHECK_THROWS_AS(validate(c), Error);
  c.order = 2;
  CHECK_NOTHROW(validate(c));
  c.command = Command::Suite;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("csv quoting") {
  Report r;
  ClassReport cr;
  cr.function = "compose(sqrt;moebius:1,0,1,1)";
  r.reports = {cr};
  const std::string csv = render_csv(r);
  CHECK(csv.rfind("function,interval,order,route,verdict,margin,trials,seed\n", 0) == 0);
  CHECK(csv.find("\"compose(sqrt;moebius:1,0,1,1)\"") != std::string::npos);
  CHECK(csv.find("\"(0,1)\"") != std::string::npos);
}

TEST_CASE("discrepancies set the exit code") {
  Report r;
  CHECK(exit_code(r) == 0);
  SuiteSummary s;
  s.discrepancies.push_back({"route_agreement", "f", 1, "", {}});
  r.summaries = {s};
  CHECK(exit_code(r) == 1);
}

TEST_CASE("recheck of stored certificates") {
  RunConfig c;
  c.command = Command::Classify;
  c.function = "poly:0,0,1";
  c.trials = 200;
  const json doc = to_json(run(c));
  RecheckResult ok = recheck_document(doc);
  CHECK(ok.checked == 1);
  CHECK(ok.confirmed == 1);
  json bad = doc;
  bad["reports"][0]["certificate"]["function"] = "poly:0,1";
  const RecheckResult no = recheck_document(bad);
  CHECK(no.checked == 1);
  CHECK(no.confirmed == 0);
  CHECK_FALSE(no.failures.empty());
  const json cert = doc["reports"][0]["certificate"];
  CHECK(recheck_document(cert).confirmed == 1);
  CHECK(recheck_document(json{{"schema", "v1"}, {"certificate", cert}}).confirmed == 1);
}

TEST_CASE("text rendering carries a digest per certificate") {
  RunConfig c;
  c.command = Command::Classify;
  c.function = "poly:0,0,1";
  c.trials = 200;
  const Report r = run(c);
  const std::string text = render_text(r);
  REQUIRE(r.reports.at(0).certificate);
  CHECK(text.find(certificate_digest(*r.reports[0].certificate)) != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
}
