// Command-line front end: run, sweep, validate, print-defaults.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "phenopf/config.hpp"
#include "phenopf/io.hpp"
#include "suites.hpp"

namespace {

using phenopf::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw phenopf::IoError("cannot read config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// "key=value" -> (key, value)
std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw phenopf::ConfigError("expected key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

phenopf::SimulationConfig load_with_overrides(const std::string& text,
                                              const std::vector<std::string>& sets) {
  auto cfg = phenopf::parse_config(text);
  for (const auto& s : sets) {
    const auto [key, value] = split_assignment(s);
    phenopf::apply_override(cfg, key, value);
  }
  return cfg;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& sets) {
  const std::string text = read_text(config_path);
  const auto cfg = load_with_overrides(text, sets);
  const auto outcome = phenopf::run_to_directory(cfg, text, out_dir);
  if (outcome.status != ExitCode::ok) {
    std::cerr << "run failed: " << outcome.message << '\n';
  } else {
    std::cout << "wrote " << outcome.records.size() << " records to " << out_dir << '\n';
  }
  return code(outcome.status);
}

int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& values,
              const std::vector<std::string>& paired, unsigned jobs, const std::string& out_dir,
              const std::vector<std::string>& sets) {
  const auto cfg = load_with_overrides(read_text(config_path), sets);
  phenopf::SweepSpec spec;
  spec.param = param;
  spec.values = split_list(values);
  spec.jobs = jobs;
  for (const auto& p : paired) {
    const auto [key, list] = split_assignment(p);
    spec.paired.emplace_back(key, split_list(list));
  }
  const auto outcome = phenopf::sweep_to_directory(cfg, spec, out_dir);
  for (const auto& [name, r] : outcome.runs) {
    std::cout << name << ": " << (r.status == ExitCode::ok ? "ok" : "failed (" + r.message + ")")
              << '\n';
  }
  return code(outcome.status);
}

int cmd_validate(const std::string& suite) {
  const auto report = phenopf::validation::run_suite(suite);
  if (!report) {
    std::cerr << "unknown suite '" << suite << "' (expected one of:";
    for (auto name : phenopf::validation::kSuiteNames) std::cerr << ' ' << name;
    std::cerr << ")\n";
    return code(ExitCode::config_error);
  }
  phenopf::validation::print_report(std::cout, *report);
  return report->passed() ? 0 : code(ExitCode::config_error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phenotype-structured phase-field tumour simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values, suite;
  std::vector<std::string> sets, paired;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--set", sets, "Override a key, key=value (repeatable)");

  auto* sweep = app.add_subcommand("sweep", "Run one configuration per parameter value");
  sweep->add_option("--config", config_path, "Base configuration file")->required();
  sweep->add_option("--param", param, "theta, ic_f.y_bar0 or alpha")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--paired", paired, "key=v1,v2,... set alongside each value (repeatable)");
  sweep->add_option("--jobs", jobs, "Sub-runs executed concurrently")->check(CLI::PositiveNumber);
  sweep->add_option("--set", sets, "Override a base key, key=value (repeatable)");

  auto* validate = app.add_subcommand("validate", "Run a validation suite");
  validate->add_option("--suite", suite, "assembly, conservation, energy, convergence or scenario")
      ->required();

  auto* defaults = app.add_subcommand("print-defaults", "Print the reference configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::config_error);
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, sets);
    if (*sweep) return cmd_sweep(config_path, param, values, paired, jobs, out_dir, sets);
    if (*validate) return cmd_validate(suite);
    if (*defaults) {
      std::cout << phenopf::format_config(phenopf::paper_config());
      return 0;
    }
  } catch (const phenopf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return code(ExitCode::config_error);
  } catch (const phenopf::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return code(ExitCode::io_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::solver_failure);
  }
  return 0;
}
