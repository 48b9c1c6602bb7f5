#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "matmono/matmono.h"

namespace {

struct Options {
  std::string function;
  std::string interval = "0,1";
  std::string property;
  std::string route;
  std::string suite;
  int order = 2;
  int trials = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int grid_size = 256;
  double alpha = 1.0;
  int subsets = 200;
  std::vector<double> points;
  std::string output;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--order,-n", o.order, "matrix order n")->check(CLI::PositiveNumber);
  cmd->add_option("--trials", o.trials, "random samples per check")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--tol", o.tol, "margin tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--output,-o", o.output, "report path (default stdout)");
  cmd->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  return 0;
}

int run_config(const nlohmann::json& config, const std::string& format, const std::string& output) {
  mm_report* report = nullptr;
  if (mm_run(config.dump().c_str(), &report) != MM_OK) {
    std::cerr << "error: " << mm_last_error() << "\n";
    return 2;
  }
  size_t needed = 0;
  mm_report_render(report, format.c_str(), nullptr, 0, &needed);
  std::string text(needed + 1, '\0');
  if (mm_report_render(report, format.c_str(), text.data(), text.size(), nullptr) != MM_OK) {
    std::cerr << "error: " << mm_last_error() << "\n";
    mm_report_free(report);
    return 2;
  }
  text.resize(needed);
  const int code = mm_report_exit_code(report);
  mm_report_free(report);
  const int io = emit(text, output);
  return io ? io : code;
}

int recheck_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  int confirmed = 0, checked = 0;
  if (mm_recheck(ss.str().c_str(), &confirmed, &checked) != MM_OK) {
    std::cerr << "error: " << mm_last_error() << "\n";
    return 2;
  }
  if (confirmed) {
    std::cout << "confirmed " << checked << " certificate(s)\n";
    return 0;
  }
  std::cout << "NOT confirmed: " << mm_last_error() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix monotonicity and convexity classifier"};
  app.set_version_flag("--version", std::string(mm_version()));
  app.require_subcommand(1);
  Options o;

  auto* classify = app.add_subcommand("classify", "n-monotone / n-convex / n-concave verdict for one function");
  classify->add_option("--fn,-f", o.function, "function text")->required();
  classify->add_option("--interval,-i", o.interval, "interval, e.g. 0,1 or [0,1)");
  classify->add_option("--property", o.property, "monotone, convex or concave")
      ->check(CLI::IsMember({"monotone", "convex", "concave"}));
  classify->add_option("--route", o.route, "loewner_dd, matrix_pairs, kraus_dd or local2x2");
  add_common(classify, o);

  auto* jensen = app.add_subcommand("jensen", "level-n assertions (i)-(iv), (v3) on [0,alpha)");
  jensen->add_option("--fn,-f", o.function, "function text")->required();
  jensen->add_option("--alpha", o.alpha, "right end of [0,alpha)")->check(CLI::PositiveNumber);
  add_common(jensen, o);

  auto* cn = app.add_subcommand("cn", "interpolation class membership");
  cn->add_option("--fn,-f", o.function, "function text")->required();
  cn->add_option("--interval,-i", o.interval, "interval");
  cn->add_option("--property", o.property, "interpolation or operator")
      ->check(CLI::IsMember({"interpolation", "operator"}));
  cn->add_option("--points", o.points, "explicit points (else sampled)")->delimiter(',');
  cn->add_option("--subsets", o.subsets, "sampled point sets")->check(CLI::PositiveNumber);
  cn->add_option("--grid-size", o.grid_size, "kernel grid size")->check(CLI::Range(2, 1 << 20));
  add_common(cn, o);

  auto* suite = app.add_subcommand("suite", "theorem verification suites");
  suite->add_option("--name", o.suite, "prop35 prop36 prop38 thm31 thm32 mathias double_piling corpus_routes cn_sanity")
      ->required();
  suite->add_option("--alpha", o.alpha, "right end of [0,alpha) for corpus suites")->check(CLI::PositiveNumber);
  suite->add_option("--count", o.subsets, "generated instances (prop36, prop38)")->check(CLI::PositiveNumber);
  add_common(suite, o);

  auto* gap = app.add_subcommand("gap", "gap polynomial search");
  gap->add_option("--subsets", o.subsets, "sampled point sets for the interpolation step")
      ->check(CLI::PositiveNumber);
  add_common(gap, o);

  std::string recheck_path;
  auto* recheck = app.add_subcommand("recheck", "recompute certificate margins from a file");
  recheck->add_option("file", recheck_path, "certificate or report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (recheck->parsed()) return recheck_file(recheck_path);

  nlohmann::json config;
  const CLI::App* cmd = app.get_subcommands().front();
  config["command"] = cmd->get_name();
  config["function"] = o.function;
  config["interval"] = o.interval;
  if (!o.property.empty()) config["property"] = o.property;
  config["route"] = o.route;
  config["suite"] = o.suite;
  config["order"] = o.order;
  config["trials"] = o.trials;
  config["seed"] = o.seed;
  config["tol"] = o.tol;
  config["grid_size"] = o.grid_size;
  config["alpha"] = o.alpha;
  config["subsets"] = o.subsets;
  config["points"] = o.points;
  config["output"] = o.output;
  config["format"] = o.format;
  return run_config(config, o.format, o.output);
}
