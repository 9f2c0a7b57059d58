// Command-line front end:
//   orthotoric verify --config <file> [--format json|csv|summary] [--suite a,b] [--seed N] [--out path]
//   orthotoric scan --config <file> [--out path]

#include "orthotoric/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace orthotoric;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of orthotoric Kähler surfaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, format = "summary", out_path;
  std::vector<std::string> suite;
  std::optional<std::uint64_t> seed;

  auto* verify = app.add_subcommand("verify", "run the verification suite on one family");
  verify->add_option("--config", config_path, "JSON config file")->required();
  verify->add_option("--format", format, "json, csv or summary");
  verify->add_option("--suite", suite, "check names (comma separated) or 'all'")->delimiter(',');
  verify->add_option("--seed", seed, "grid seed, overriding the config");
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  auto* scan = app.add_subcommand("scan", "classify a grid of hyperkähler parameters, CSV output");
  scan->add_option("--config", config_path, "JSON config file with a 'scan' table")->required();
  scan->add_option("--out", out_path, "write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      const ReportFormat fmt = parse_format(format);
      RunConfig cfg = parse_config(read_file(config_path));
      if (!suite.empty()) cfg.suite = suite;
      if (seed) cfg.grid.seed = *seed;
      const Report report = run_suite(cfg);
      write_output(emit(report, fmt), out_path);
      return report.pass ? 0 : 1;
    }
    write_output(run_scan(read_file(config_path)), out_path);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 3;
  }
}
