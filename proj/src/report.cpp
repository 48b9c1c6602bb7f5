#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "errors.hpp"

namespace matmono {

using nlohmann::json;

namespace {

template <class E, std::size_t N>
E parse_name(const std::string& name, const char* const (&names)[N], const char* what) {
  for (std::size_t i = 0; i < N; ++i)
    if (name == names[i]) return static_cast<E>(i);
  fail(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + name + "'");
}

const char* const kCommandNames[] = {"classify", "jensen", "cn", "suite", "gap"};
const char* const kFormatNames[] = {"json", "csv", "text"};

Assertion parse_assertion(const std::string& name) {
  for (Assertion a : {Assertion::IConvexF0, Assertion::IiJensen, Assertion::IiiQuotientMonotone,
                      Assertion::IvProjection, Assertion::V3TwoContractions})
    if (name == assertion_name(a)) return a;
  fail(ErrorCode::Schema, "unknown assertion '" + name + "'");
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::Schema, std::string("missing field '") + key + "'");
  return j.at(key).get<T>();
}

double num(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::Schema, std::string("missing field '") + key + "'");
  return number_from_json(j.at(key));
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Route default_route(const std::string& property) {
  if (property == "monotone") return Route::LoewnerDd;
  if (property == "convex" || property == "concave") return Route::KrausDd;
  fail(ErrorCode::InvalidArgument, "unknown property '" + property + "' (monotone, convex, concave)");
}

std::vector<SuiteSummary> run_suite(const RunConfig& c) {
  const std::string& name = c.suite;
  std::vector<SuiteSummary> out;
  if (name == "prop35") {
    out.push_back(verify_prop35(c.trials, c.seed, c.tol));
  } else if (name == "prop36") {
    out.push_back(verify_prop36(c.subsets, c.trials, c.seed, c.tol));
  } else if (name == "prop38") {
    out.push_back(verify_prop38(c.subsets, 100, c.trials, c.seed, c.tol));
  } else if (name == "thm31") {
    const auto corpus = default_corpus(c.seed);
    for (int n = 1; n <= c.order; ++n) out.push_back(verify_equivalence_ii_iii(corpus, c.alpha, n, c.trials, c.seed, c.tol));
  } else if (name == "thm32") {
    const auto corpus = default_corpus(c.seed);
    for (int n = 2; n <= std::max(2, c.order); ++n) out.push_back(verify_thm32_gap(corpus, c.alpha, n, c.trials, c.seed, c.tol));
  } else if (name == "mathias") {
    out.push_back(verify_mathias_remark(c.order, c.trials, c.seed, c.tol));
  } else if (name == "double_piling") {
    out.push_back(verify_double_piling(default_corpus(c.seed), c.alpha, c.order, c.trials, c.seed, c.tol));
  } else if (name == "corpus_routes") {
    out.push_back(verify_route_agreement(default_corpus(c.seed), c.alpha, c.order, c.trials, c.seed, c.tol));
  } else if (name == "cn_sanity") {
    out.push_back(verify_cn_sanity(c.trials, c.seed, c.tol));
  } else {
    fail(ErrorCode::InvalidArgument, "unknown suite '" + name +
                                         "' (prop35 prop36 prop38 thm31 thm32 mathias double_piling corpus_routes cn_sanity)");
  }
  return out;
}

}  // namespace

const char* command_name(Command c) { return kCommandNames[static_cast<int>(c)]; }
Command parse_command(const std::string& name) { return parse_name<Command>(name, kCommandNames, "command"); }
const char* format_name(Format f) { return kFormatNames[static_cast<int>(f)]; }
Format parse_format(const std::string& name) { return parse_name<Format>(name, kFormatNames, "format"); }

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::InvalidArgument, what);
  };
  require(c.order >= 1, "order must be at least 1");
  require(c.trials >= 1, "trials must be at least 1");
  require(c.tol > 0.0, "tol must be positive");
  require(c.grid_size >= 2, "grid size must be at least 2");
  require(c.subsets >= 1, "subsets must be at least 1");
  require(c.alpha > 0.0, "alpha must be positive");
  if (c.command == Command::Classify || c.command == Command::Jensen || c.command == Command::Cn)
    require(!c.function.empty(), std::string(command_name(c.command)) + " needs a function");
  if (c.command == Command::Suite) require(!c.suite.empty(), "suite needs a name");
  if (c.command == Command::Cn)
    require(c.property == "interpolation" || c.property == "operator", "cn property must be interpolation or operator");
}

std::size_t Report::discrepancy_count() const {
  std::size_t n = 0;
  for (const auto& s : summaries) n += s.discrepancies.size();
  return n;
}

Report run(const RunConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.config = c;
  report.timestamp = utc_now();

  switch (c.command) {
    case Command::Classify: {
      const FunctionSpec f = parse_function(c.function);
      const IntervalSpec in = IntervalSpec::parse(c.interval);
      const Route route = c.route.empty() ? default_route(c.property) : parse_route(c.route);
      if (c.property == "monotone") {
        if (route == Route::LoewnerDd)
          report.reports.push_back(is_n_monotone_dd(f, in, c.order, c.trials, c.seed, c.tol));
        else if (route == Route::MatrixPairs)
          report.reports.push_back(is_n_monotone_mx(f, in, c.order, c.trials, c.seed, c.tol));
        else
          fail(ErrorCode::InvalidArgument, "monotone supports routes loewner_dd and matrix_pairs");
      } else if (c.property == "convex") {
        report.reports.push_back(is_n_convex(f, in, c.order, c.trials, c.seed, c.tol, route));
      } else if (c.property == "concave") {
        report.reports.push_back(is_n_concave(f, in, c.order, c.trials, c.seed, c.tol, route));
      } else {
        default_route(c.property);
      }
      break;
    }
    case Command::Jensen: {
      const FunctionSpec f = parse_function(c.function);
      report.assertions = check_assertions(f, c.alpha, c.order, c.trials, c.seed, c.tol);
      break;
    }
    case Command::Cn: {
      const FunctionSpec f = parse_function(c.function);
      if (c.property == "operator") {
        report.reports.push_back(cn_operator_check(f, c.order, c.trials, c.seed, c.tol));
      } else {
        const IntervalSpec in = IntervalSpec::parse(c.interval);
        if (c.points.empty())
          report.reports.push_back(
              cn_membership_sampled(f, in, c.order, c.subsets, c.seed, c.grid_size, kCnResidualTolerance));
        else
          report.reports.push_back(cn_membership(f, in, c.order, c.points, c.grid_size, kCnResidualTolerance));
      }
      break;
    }
    case Command::Suite: report.summaries = run_suite(c); break;
    case Command::Gap: {
      BisectionConfig grid;
      report.summaries.push_back(gap_search(c.order, grid, c.trials, c.subsets, c.seed, c.tol));
      break;
    }
  }
  report.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_code(const Report& report) { return report.discrepancy_count() > 0 ? 1 : 0; }

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  j["function"] = c.function;
  j["interval"] = c.interval;
  j["property"] = c.property;
  j["route"] = c.route;
  j["suite"] = c.suite;
  j["order"] = c.order;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["grid_size"] = c.grid_size;
  j["alpha"] = c.alpha;
  j["subsets"] = c.subsets;
  j["points"] = c.points;
  j["output"] = c.output;
  j["format"] = format_name(c.format);
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  try {
    RunConfig c;
    c.command = parse_command(field<std::string>(j, "command"));
    c.function = j.value("function", c.function);
    c.interval = j.value("interval", c.interval);
    c.property = j.value("property", c.command == Command::Cn ? std::string("interpolation") : c.property);
    c.route = j.value("route", c.route);
    c.suite = j.value("suite", c.suite);
    c.order = j.value("order", c.order);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.tol = j.value("tol", c.tol);
    c.grid_size = j.value("grid_size", c.grid_size);
    c.alpha = j.value("alpha", c.alpha);
    c.subsets = j.value("subsets", c.subsets);
    c.points = j.value("points", c.points);
    c.output = j.value("output", c.output);
    c.format = parse_format(j.value("format", std::string("json")));
    return c;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad config: ") + e.what());
  }
}

json report_to_json(const ClassReport& r) {
  json j;
  j["property"] = r.property;
  j["function"] = r.function;
  j["interval"] = interval_to_json(r.interval);
  j["order"] = r.order;
  j["verdict"] = verdict_name(r.verdict);
  j["route"] = route_name(r.route);
  j["trials"] = r.trials;
  j["tolerance"] = number_to_json(r.tolerance);
  j["seed"] = r.seed;
  j["min_margin"] = number_to_json(r.min_margin);
  j["ambiguous"] = r.ambiguous;
  j["note"] = r.note;
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  return j;
}

ClassReport class_report_from_json(const json& j) {
  try {
    ClassReport r;
    r.property = field<std::string>(j, "property");
    r.function = field<std::string>(j, "function");
    r.interval = interval_from_json(j.at("interval"));
    r.order = field<int>(j, "order");
    r.verdict = parse_verdict(field<std::string>(j, "verdict"));
    r.route = parse_route(field<std::string>(j, "route"));
    r.trials = field<int>(j, "trials");
    r.tolerance = num(j, "tolerance");
    r.seed = field<std::uint64_t>(j, "seed");
    r.min_margin = num(j, "min_margin");
    r.ambiguous = field<int>(j, "ambiguous");
    r.note = field<std::string>(j, "note");
    if (j.contains("certificate") && !j["certificate"].is_null()) r.certificate = certificate_from_json(j["certificate"]);
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, std::string("malformed report entry: ") + e.what());
  }
}

json summary_to_json(const SuiteSummary& s) {
  json j;
  j["name"] = s.name;
  j["instances"] = s.instances;
  j["holds"] = s.holds;
  j["skipped"] = s.skipped;
  json metrics = json::object();
  for (const auto& [k, v] : s.metrics) metrics[k] = number_to_json(v);
  j["metrics"] = std::move(metrics);
  j["notes"] = s.notes;
  json ds = json::array();
  for (const Discrepancy& d : s.discrepancies) {
    json e = json::array();
    for (const ClassReport& r : d.evidence) e.push_back(report_to_json(r));
    ds.push_back({{"kind", d.kind}, {"function", d.function}, {"order", d.order}, {"detail", d.detail}, {"evidence", e}});
  }
  j["discrepancies"] = std::move(ds);
  json rs = json::array();
  for (const ClassReport& r : s.reports) rs.push_back(report_to_json(r));
  j["reports"] = std::move(rs);
  return j;
}

SuiteSummary summary_from_json(const json& j) {
  try {
    SuiteSummary s;
    s.name = field<std::string>(j, "name");
    s.instances = field<int>(j, "instances");
    s.holds = field<int>(j, "holds");
    s.skipped = field<int>(j, "skipped");
    for (const auto& [k, v] : j.at("metrics").items()) s.metrics[k] = number_from_json(v);
    s.notes = j.at("notes").get<std::vector<std::string>>();
    for (const json& d : j.at("discrepancies")) {
      Discrepancy x;
      x.kind = field<std::string>(d, "kind");
      x.function = field<std::string>(d, "function");
      x.order = field<int>(d, "order");
      x.detail = field<std::string>(d, "detail");
      for (const json& e : d.at("evidence")) x.evidence.push_back(class_report_from_json(e));
      s.discrepancies.push_back(std::move(x));
    }
    for (const json& r : j.at("reports")) s.reports.push_back(class_report_from_json(r));
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, std::string("malformed summary: ") + e.what());
  }
}

json to_json(const Report& report) {
  json j;
  j["schema"] = kSchemaVersion;
  j["tool"] = report.tool;
  j["version"] = report.version;
  j["config"] = config_to_json(report.config);
  json rs = json::array();
  for (const ClassReport& r : report.reports) rs.push_back(report_to_json(r));
  j["reports"] = std::move(rs);
  json as = json::array();
  for (const AssertionVerdict& a : report.assertions)
    as.push_back({{"assertion", assertion_name(a.assertion)}, {"report", report_to_json(a.report)}});
  j["assertions"] = std::move(as);
  json ss = json::array();
  for (const SuiteSummary& s : report.summaries) ss.push_back(summary_to_json(s));
  j["summaries"] = std::move(ss);
  j["discrepancy_count"] = report.discrepancy_count();
  j["timestamp"] = {{"utc", report.timestamp}, {"wall_clock_seconds", report.wall_clock}};
  return j;
}

Report report_from_json(const json& j) {
  try {
    if (!j.is_object()) fail(ErrorCode::Schema, "report must be a JSON object");
    const std::string schema = field<std::string>(j, "schema");
    if (schema != kSchemaVersion) fail(ErrorCode::Schema, "unsupported report schema '" + schema + "'");
    Report r;
    r.tool = field<std::string>(j, "tool");
    r.version = field<std::string>(j, "version");
    r.config = config_from_json(j.at("config"));
    for (const json& x : j.at("reports")) r.reports.push_back(class_report_from_json(x));
    for (const json& x : j.at("assertions"))
      r.assertions.push_back({parse_assertion(field<std::string>(x, "assertion")), class_report_from_json(x.at("report"))});
    for (const json& x : j.at("summaries")) r.summaries.push_back(summary_from_json(x));
    const json& ts = j.at("timestamp");
    r.timestamp = field<std::string>(ts, "utc");
    r.wall_clock = field<double>(ts, "wall_clock_seconds");
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, std::string("malformed report: ") + e.what());
  }
}

std::string certificate_digest(const Certificate& cert) {
  // FNV-1a over the compact JSON form.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cert).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << "function,interval,order,route,verdict,margin,trials,seed\n";
  auto row = [&](const ClassReport& r) {
    out << csv_field(r.function) << ',' << csv_field(r.interval.to_string()) << ',' << r.order << ','
        << route_name(r.route) << ',' << verdict_name(r.verdict) << ',' << fmt(r.min_margin) << ',' << r.trials << ','
        << r.seed << '\n';
  };
  for (const auto& r : report.reports) row(r);
  for (const auto& a : report.assertions) row(a.report);
  for (const auto& s : report.summaries)
    for (const auto& r : s.reports) row(r);
  return out.str();
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  auto line = [&](const ClassReport& r, const std::string& label) {
    out << verdict_name(r.verdict) << "  " << label << "  " << r.function << " on " << r.interval.to_string()
        << "  n=" << r.order << "  route=" << route_name(r.route) << "  trials=" << r.trials
        << "  margin=" << short_fmt(r.min_margin);
    if (r.ambiguous) out << "  ambiguous=" << r.ambiguous;
    if (r.certificate)
      out << "  cert=" << certificate_kind_name(r.certificate->kind()) << ':' << certificate_digest(*r.certificate);
    out << '\n';
  };
  out << report.tool << ' ' << report.version << "  " << command_name(report.config.command) << "  seed="
      << report.config.seed << '\n';
  for (const auto& r : report.reports) line(r, r.property);
  for (const auto& a : report.assertions) line(a.report, assertion_name(a.assertion));
  for (const auto& s : report.summaries) {
    out << "suite " << s.name << ": " << s.holds << '/' << s.instances << " hold, " << s.skipped << " skipped, "
        << s.discrepancies.size() << " discrepancies\n";
    for (const auto& r : s.reports) {
      out << "  ";
      line(r, r.property);
    }
    for (const auto& [k, v] : s.metrics) out << "  " << k << " = " << fmt(v) << '\n';
    for (const auto& d : s.discrepancies)
      out << "  DISCREPANCY " << d.kind << "  " << d.function << "  n=" << d.order << "  " << d.detail << '\n';
    for (const auto& n : s.notes) out << "  note: " << n << '\n';
  }
  return out.str();
}

std::string render(const Report& report, Format format) {
  switch (format) {
    case Format::Json: return to_json(report).dump(2) + "\n";
    case Format::Csv: return render_csv(report);
    case Format::Text: return render_text(report);
  }
  return {};
}

RecheckResult recheck_document(const json& doc) {
  RecheckResult out;
  auto one = [&](const Certificate& c) {
    ++out.checked;
    if (recheck(c)) {
      ++out.confirmed;
    } else {
      const MarginCheck m = recompute_margin(c);
      out.failures.push_back(std::string(check_kind_name(c.check)) + " " + c.function + ": stored margin " +
                             fmt(c.margin) + ", recomputed " + fmt(m.margin) + (m.hypothesis_ok ? "" : " (" + m.detail + ")"));
    }
  };
  auto from_report = [&](const ClassReport& r) {
    if (r.certificate) one(*r.certificate);
  };
  if (!doc.is_object()) fail(ErrorCode::Schema, "expected a JSON object");
  if (doc.contains("reports")) {
    const Report report = report_from_json(doc);
    for (const auto& r : report.reports) from_report(r);
    for (const auto& a : report.assertions) from_report(a.report);
    for (const auto& s : report.summaries)
      for (const auto& r : s.reports) from_report(r);
  } else if (doc.contains("certificate")) {
    const std::string schema = doc.value("schema", std::string(kSchemaVersion));
    if (schema != kSchemaVersion) fail(ErrorCode::Schema, "unsupported certificate schema '" + schema + "'");
    one(certificate_from_json(doc["certificate"]));
  } else {
    one(certificate_from_json(doc));
  }
  return out;
}

}  // namespace matmono
