#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phenopf/config.hpp"
#include "phenopf/mesh.hpp"
#include "phenopf/phenotype.hpp"
#include "phenopf/simulation.hpp"

namespace phenopf {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process exit codes of the command-line tool.
enum class ExitCode : int { ok = 0, config_error = 1, solver_failure = 2, io_error = 3 };

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Legacy VTK ASCII, unstructured grid of triangles, one scalar per point.
void write_vtk(const ScalarField& field, const Mesh& mesh, const std::filesystem::path& path);

struct VtkData {
  std::vector<Point2> points;
  std::vector<std::array<std::size_t, 3>> cells;
  std::string scalar_name;
  std::vector<double> values;
};

VtkData read_vtk(const std::filesystem::path& path);

inline constexpr const char* kObservablesHeader =
    "time,tumour_measure,phi_mass,energy,sigma_min,sigma_max,probeA_mean,probeA_var,"
    "probeB_mean,probeB_var,probeC_mean,probeC_var,fmass_err,ifw_min,ifw_max";

std::string format_observable_row(const ObservableRecord& r);

/// Row-per-step CSV writer; throws IoError on open or write failure.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header);
  void write_row(const std::string& row);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Header of a phenotype probe file: time, then one column per grid point.
std::string probe_header(const PhenotypeGrid& grid);
std::string format_probe_row(double time, std::span<const double> f_node);

struct RunManifest {
  std::string config_text;
  std::string resolved_config;
  std::string version;
  std::string start_time;
  std::string end_time;
  std::vector<std::string> outputs;
  int exit_status = 0;
  std::string message;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);

/// Version string compiled into the library.
std::string code_version();

struct RunOutcome {
  ExitCode status = ExitCode::ok;
  std::string message;
  std::vector<ObservableRecord> records;
};

/// Runs one configuration and writes observables.csv, field snapshots,
/// probe files and manifest.txt into out_dir. `config_text` is stored
/// verbatim in the manifest. Never throws; failures map to exit codes.
RunOutcome run_to_directory(const SimulationConfig& cfg, const std::string& config_text,
                            const std::filesystem::path& out_dir);

struct SweepSpec {
  std::string param;
  std::vector<std::string> values;
  /// Extra keys set alongside each value (same length as values).
  std::vector<std::pair<std::string, std::vector<std::string>>> paired;
  unsigned jobs = 1;
};

/// Keys a sweep may vary.
bool sweepable(const std::string& key);

struct SweepOutcome {
  /// ok only when every sub-run succeeded.
  ExitCode status = ExitCode::ok;
  /// (sub-directory name, outcome) in value order.
  std::vector<std::pair<std::string, RunOutcome>> runs;
};

/// One sub-run per value in out_dir/<param>_<value>, then comparison.csv.
/// A failed sub-run does not stop the others. Throws ConfigError for an
/// invalid spec before any run starts.
SweepOutcome sweep_to_directory(const SimulationConfig& base, const SweepSpec& spec,
                                const std::filesystem::path& out_dir);

}  // namespace phenopf
