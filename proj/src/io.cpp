#include "phenopf/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <thread>

#ifndef PHENOPF_VERSION
#define PHENOPF_VERSION "unknown"
#endif

namespace phenopf {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string code_version() { return PHENOPF_VERSION; }

void write_vtk(const ScalarField& field, const Mesh& mesh, const fs::path& path) {
  if (field.values.size() != mesh.node_count()) {
    throw std::invalid_argument("write_vtk: field length does not match mesh");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string name(field_name(field.tag));
  out << "# vtk DataFile Version 3.0\n" << "phenopf " << name << "\n" << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const auto& p : mesh.nodes) out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) out << "5\n";
  out << "POINT_DATA " << mesh.node_count() << '\n'
      << "SCALARS " << name << " double 1\n"
      << "LOOKUP_TABLE default\n";
  for (double v : field.values) out << format_double(v) << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

void expect_word(std::istream& in, const std::string& word, const fs::path& path) {
  std::string w;
  if (!(in >> w) || w != word) {
    throw IoError(path.string() + ": expected '" + word + "', found '" + w + "'");
  }
}

}  // namespace

VtkData read_vtk(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "# vtk DataFile Version 3.0") throw IoError(path.string() + ": not a legacy VTK file");
  std::getline(in, line);  // title
  expect_word(in, "ASCII", path);
  expect_word(in, "DATASET", path);
  expect_word(in, "UNSTRUCTURED_GRID", path);
  VtkData d;
  std::size_t n = 0, m = 0, total = 0;
  std::string type;
  expect_word(in, "POINTS", path);
  in >> n >> type;
  d.points.resize(n);
  for (auto& p : d.points) {
    double z = 0.0;
    in >> p.x >> p.y >> z;
  }
  expect_word(in, "CELLS", path);
  in >> m >> total;
  d.cells.resize(m);
  for (auto& c : d.cells) {
    std::size_t k = 0;
    in >> k >> c[0] >> c[1] >> c[2];
    if (k != 3) throw IoError(path.string() + ": only triangles are supported");
  }
  expect_word(in, "CELL_TYPES", path);
  in >> m;
  for (std::size_t e = 0; e < m; ++e) {
    int t = 0;
    in >> t;
    if (t != 5) throw IoError(path.string() + ": unexpected cell type");
  }
  expect_word(in, "POINT_DATA", path);
  in >> n;
  expect_word(in, "SCALARS", path);
  in >> d.scalar_name >> type;
  std::string comps;
  in >> comps;
  expect_word(in, "LOOKUP_TABLE", path);
  in >> type;
  d.values.resize(n);
  for (auto& v : d.values) in >> v;
  if (!in) throw IoError(path.string() + ": truncated file");
  return d;
}

std::string format_observable_row(const ObservableRecord& r) {
  std::string row = format_double(r.time);
  for (double v : {r.tumour_measure, r.phi_mass, r.energy, r.sigma_min, r.sigma_max,
                   r.probes[0].mean, r.probes[0].variance, r.probes[1].mean, r.probes[1].variance,
                   r.probes[2].mean, r.probes[2].variance, r.fmass_err, r.ifw_min, r.ifw_max}) {
    row += ',';
    row += format_double(v);
  }
  return row;
}

CsvFile::CsvFile(const fs::path& path, const std::string& header) : path_(path), out_(path) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  out_ << header << '\n';
}

void CsvFile::write_row(const std::string& row) {
  out_ << row << '\n';
  if (!out_) throw IoError("write failed: " + path_.string());
}

std::string probe_header(const PhenotypeGrid& grid) {
  std::string h = "time";
  for (double y : grid.y_values) {
    char buf[40];
    std::snprintf(buf, sizeof buf, ",f@%.6g", y);
    h += buf;
  }
  return h;
}

std::string format_probe_row(double time, std::span<const double> f_node) {
  std::string row = format_double(time);
  for (double v : f_node) {
    row += ',';
    row += format_double(v);
  }
  return row;
}

void write_manifest(const RunManifest& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "version: " << m.version << '\n'
      << "start: " << m.start_time << '\n'
      << "end: " << m.end_time << '\n'
      << "exit_status: " << m.exit_status << '\n';
  if (!m.message.empty()) out << "message: " << m.message << '\n';
  out << "outputs:\n";
  for (const auto& o : m.outputs) out << "  " << o << '\n';
  out << "--- config (as given) ---\n" << m.config_text;
  if (!m.config_text.empty() && m.config_text.back() != '\n') out << '\n';
  out << "--- config (resolved) ---\n" << m.resolved_config;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_check";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

}  // namespace

RunOutcome run_to_directory(const SimulationConfig& cfg, const std::string& config_text,
                            const fs::path& out_dir) {
  RunOutcome outcome;
  RunManifest man;
  man.config_text = config_text;
  man.resolved_config = format_config(cfg);
  man.version = code_version();
  man.start_time = utc_now();
  try {
    check_writable(out_dir);
  } catch (const IoError& e) {
    outcome.status = ExitCode::io_error;
    outcome.message = e.what();
    return outcome;
  }

  try {
    Simulation sim(cfg);
    const auto report = validate_assumptions(cfg, sim.functions());
    if (!report.all_passed()) {
      std::string failed;
      for (const auto& c : report.checks) {
        if (!c.passed) failed += (failed.empty() ? "" : "; ") + c.id + " (" + c.detail + ")";
      }
      throw ConfigError("model assumptions failed: " + failed);
    }
    const std::size_t steps = cfg.step_count();
    const auto& mesh = sim.operators().mesh;
    CsvFile observables(out_dir / "observables.csv", kObservablesHeader);
    man.outputs.push_back("observables.csv");
    std::vector<CsvFile> probes;
    const auto header = probe_header(sim.grid());
    for (const char* name : {"A", "B", "C"}) {
      const std::string file = std::string("phenotype_probe_") + name + ".csv";
      probes.emplace_back(out_dir / file, header);
      man.outputs.push_back(file);
    }
    const auto probe_nodes = sim.probe_nodes();

    RunHooks hooks;
    hooks.on_record = [&](const SimulationState& s, const ObservableRecord& r,
                          const StepDiagnostics*) {
      observables.write_row(format_observable_row(r));
      for (std::size_t k = 0; k < 3; ++k) {
        probes[k].write_row(format_probe_row(s.time, s.f.node(probe_nodes[k])));
      }
      if (s.step % cfg.output.stride == 0 || s.step == steps) {
        for (const auto* field : {&s.ch.phi, &s.sigma}) {
          const std::string file = "field_" + std::string(field_name(field->tag)) + "_" +
                                   std::to_string(s.step) + ".vtk";
          write_vtk(*field, mesh, out_dir / file);
          man.outputs.push_back(file);
        }
      }
    };
    hooks.on_abort = [&](const SimulationState& s, const std::string&) {
      for (const auto* field : {&s.ch.phi, &s.ch.mu, &s.sigma}) {
        const std::string file = "abort_" + std::string(field_name(field->tag)) + "_" +
                                 std::to_string(s.step) + ".vtk";
        write_vtk(*field, mesh, out_dir / file);
        man.outputs.push_back(file);
      }
    };
    auto result = run(sim, sim.initial_state(), steps, hooks);
    outcome.records = std::move(result.records);
  } catch (const ConfigError& e) {
    outcome.status = ExitCode::config_error;
    outcome.message = e.what();
  } catch (const RunAborted& e) {
    outcome.status = ExitCode::solver_failure;
    outcome.message = std::string(e.what()) + " (last good step " +
                      std::to_string(e.last_good_step()) + ")";
  } catch (const SolverError& e) {
    outcome.status = ExitCode::solver_failure;
    outcome.message = e.what();
  } catch (const IoError& e) {
    outcome.status = ExitCode::io_error;
    outcome.message = e.what();
  } catch (const fs::filesystem_error& e) {
    outcome.status = ExitCode::io_error;
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome.status = ExitCode::solver_failure;
    outcome.message = e.what();
  }

  man.end_time = utc_now();
  man.exit_status = static_cast<int>(outcome.status);
  man.message = outcome.message;
  try {
    write_manifest(man, out_dir / "manifest.txt");
  } catch (const IoError& e) {
    if (outcome.status == ExitCode::ok) {
      outcome.status = ExitCode::io_error;
      outcome.message = e.what();
    }
  }
  return outcome;
}

bool sweepable(const std::string& key) {
  return key == "theta" || key == "ic_f.y_bar0" || key == "alpha";
}

SweepOutcome sweep_to_directory(const SimulationConfig& base, const SweepSpec& spec,
                                const fs::path& out_dir) {
  if (!sweepable(spec.param)) {
    throw ConfigError("cannot sweep '" + spec.param + "' (expected theta, ic_f.y_bar0 or alpha)");
  }
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  for (const auto& [key, list] : spec.paired) {
    if (!sweepable(key)) throw ConfigError("cannot pair '" + key + "' with a sweep");
    if (list.size() != spec.values.size()) {
      throw ConfigError("paired key '" + key + "' needs " + std::to_string(spec.values.size()) +
                        " values");
    }
  }
  // Resolve every sub-configuration before running anything.
  std::vector<SimulationConfig> configs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    SimulationConfig c = base;
    apply_override(c, spec.param, spec.values[i]);
    for (const auto& [key, list] : spec.paired) apply_override(c, key, list[i]);
    configs.push_back(c);
    names.push_back(spec.param + "_" + spec.values[i]);
  }

  SweepOutcome out;
  out.runs.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      out.runs[i] = {names[i], run_to_directory(configs[i], format_config(configs[i]),
                                                out_dir / names[i])};
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& [name, r] : out.runs) {
    if (r.status != ExitCode::ok && out.status == ExitCode::ok) out.status = r.status;
  }
  try {
    check_writable(out_dir);
    CsvFile cmp(out_dir / "comparison.csv",
                spec.param + ",time,tumour_measure,probeA_mean,probeA_var");
    for (std::size_t i = 0; i < configs.size(); ++i) {
      for (const auto& r : out.runs[i].second.records) {
        cmp.write_row(spec.values[i] + "," + format_double(r.time) + "," +
                      format_double(r.tumour_measure) + "," + format_double(r.probes[0].mean) +
                      "," + format_double(r.probes[0].variance));
      }
    }
  } catch (const IoError&) {
    out.status = ExitCode::io_error;
  }
  return out;
}

}  // namespace phenopf
