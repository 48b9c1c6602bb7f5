#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifiers.hpp"
#include "theorems.hpp"

namespace matmono {

inline constexpr const char* kToolName = "matmono";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "v1";

enum class Command { Classify, Jensen, Cn, Suite, Gap };
enum class Format { Json, Csv, Text };

const char* command_name(Command c);
Command parse_command(const std::string& name);
const char* format_name(Format f);
Format parse_format(const std::string& name);

struct RunConfig {
  Command command = Command::Classify;
  std::string function;
  /// "lo,hi" with optional brackets, e.g. "[0,1)"; bare "lo,hi" is open.
  std::string interval = "0,1";
  /// classify: monotone | convex | concave; cn: interpolation | operator.
  std::string property = "monotone";
  /// Empty picks the default route for the property.
  std::string route;
  /// suite name: prop35 prop36 prop38 thm31 thm32 mathias double_piling corpus_routes cn_sanity
  std::string suite;
  int order = 2;
  int trials = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int grid_size = kDefaultGridSize;
  /// Right end of [0, alpha) for jensen and the corpus suites.
  double alpha = 1.0;
  /// cn: number of sampled point sets when `points` is empty; suites: instance count.
  int subsets = 200;
  std::vector<double> points;
  std::string output;
  Format format = Format::Json;

  bool operator==(const RunConfig&) const = default;
};

/// Throws InvalidArgument for missing or non-positive fields.
void validate(const RunConfig& config);

struct Report {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  RunConfig config;
  std::vector<ClassReport> reports;
  std::vector<AssertionVerdict> assertions;
  std::vector<SuiteSummary> summaries;
  /// Excluded from determinism comparisons.
  std::string timestamp;
  double wall_clock = 0.0;

  bool operator==(const Report&) const = default;
  std::size_t discrepancy_count() const;
};

Report run(const RunConfig& config);

/// 0 on a completed run, 1 when any suite recorded a discrepancy.
int exit_code(const Report& report);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ClassReport& r);
ClassReport class_report_from_json(const nlohmann::json& j);
nlohmann::json summary_to_json(const SuiteSummary& s);
SuiteSummary summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

std::string render(const Report& report, Format format);
std::string render_csv(const Report& report);
std::string render_text(const Report& report);

/// Short stable digest of a certificate's JSON form.
std::string certificate_digest(const Certificate& cert);

struct RecheckResult {
  int checked = 0;
  int confirmed = 0;
  std::vector<std::string> failures;
};

/// Accepts a bare certificate, {"schema": "v1", "certificate": ...} or a full report.
RecheckResult recheck_document(const nlohmann::json& doc);

}  // namespace matmono
