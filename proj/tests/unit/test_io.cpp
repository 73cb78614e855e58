#include <doctest.h>

#include <filesystem>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phenopf/io.hpp"

using namespace phenopf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("phenopf_io_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
            std::to_string(std::rand()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

SimulationConfig tiny(double t_end) {
  auto cfg = paper_config();
  cfg.nx = 8;
  cfg.t_end = t_end;
  cfg.output.stride = 2;
  return cfg;
}

}  // namespace

TEST_SUITE("cli-io") {
  TEST_CASE("vtk of a single cell") {
    TempDir dir;
    fs::create_directories(dir.path);
    const auto mesh = build_uniform_mesh(1);
    write_vtk({FieldTag::phi, std::vector<double>(4, 1.0)}, mesh, dir.path / "one.vtk");
    const auto lines = lines_of(dir.path / "one.vtk");
    CHECK(lines.at(0) == "# vtk DataFile Version 3.0");
    CHECK(lines.at(3) == "DATASET UNSTRUCTURED_GRID");
    CHECK(lines.at(4) == "POINTS 4 double");
    const auto d = read_vtk(dir.path / "one.vtk");
    CHECK(d.points.size() == 4);
    CHECK(d.cells.size() == 2);
    CHECK(d.scalar_name == "phi");
    CHECK(d.values == std::vector<double>(4, 1.0));
  }

  TEST_CASE("vtk round trip is exact") {
    TempDir dir;
    fs::create_directories(dir.path);
    const auto mesh = build_uniform_mesh(9);
    std::vector<double> v(mesh.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.1 + 1.2345678901234567 * i) / 3.0;
    write_vtk({FieldTag::sigma, v}, mesh, dir.path / "s.vtk");
    const auto d = read_vtk(dir.path / "s.vtk");
    CHECK(d.values == v);
    CHECK(d.scalar_name == "sigma");
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      CHECK(d.points[i].x == mesh.nodes[i].x);
      CHECK(d.points[i].y == mesh.nodes[i].y);
    }
    CHECK_THROWS_AS(write_vtk({FieldTag::phi, {1.0}}, mesh, dir.path / "bad.vtk"), std::invalid_argument);
    CHECK_THROWS_AS(read_vtk(dir.path / "missing.vtk"), IoError);
  }

  TEST_CASE("format_double round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
      CHECK(std::stod(format_double(v)) == v);
    }
  }

  TEST_CASE("run directory contents") {
    TempDir dir;
    const auto cfg = tiny(0.005);
    const auto out = run_to_directory(cfg, format_config(cfg), dir.path);
    REQUIRE(out.status == ExitCode::ok);
    const auto obs = lines_of(dir.path / "observables.csv");
    CHECK(obs.at(0) == kObservablesHeader);
    CHECK(obs.size() == 1 + 6);
    for (const char* f : {"field_phi_0.vtk", "field_phi_2.vtk", "field_phi_4.vtk", "field_phi_5.vtk",
                          "field_sigma_5.vtk", "phenotype_probe_A.csv", "phenotype_probe_B.csv",
                          "phenotype_probe_C.csv", "manifest.txt"}) {
      CHECK_MESSAGE(fs::exists(dir.path / f), f);
    }
    const auto probe = lines_of(dir.path / "phenotype_probe_C.csv");
    CHECK(probe.size() == 7);
    CHECK(std::count(probe[0].begin(), probe[0].end(), ',') == 18);
    // every listed output exists; the manifest re-creates the configuration
    const auto manifest = lines_of(dir.path / "manifest.txt");
    bool in_outputs = false;
    std::string resolved;
    bool in_resolved = false;
    for (const auto& line : manifest) {
      if (line == "outputs:") {
        in_outputs = true;
        continue;
      }
      if (in_outputs && line.rfind("  ", 0) == 0) CHECK(fs::exists(dir.path / line.substr(2)));
      else in_outputs = false;
      if (in_resolved) resolved += line + "\n";
      if (line == "--- config (resolved) ---") in_resolved = true;
    }
    CHECK(format_config(parse_config(resolved)) == format_config(cfg));
    // the t = 0 snapshot of the indicator holds only -1 and 1
    for (double v : read_vtk(dir.path / "field_phi_0.vtk").values) CHECK((v == 1.0 || v == -1.0));
  }

  TEST_CASE("zero duration run writes one data row") {
    TempDir dir;
    const auto out = run_to_directory(tiny(0.0), "", dir.path);
    CHECK(out.status == ExitCode::ok);
    CHECK(lines_of(dir.path / "observables.csv").size() == 2);
  }

  TEST_CASE("identical runs give byte-identical csv files") {
    TempDir a, b;
    const auto cfg = tiny(0.003);
    run_to_directory(cfg, "", a.path);
    run_to_directory(cfg, "", b.path);
    for (const char* f : {"observables.csv", "phenotype_probe_A.csv"}) {
      std::ifstream fa(a.path / f), fb(b.path / f);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      CHECK(sa.str() == sb.str());
    }
  }

  TEST_CASE("unusable output directory") {
    TempDir dir;
    fs::create_directories(dir.path);
    std::ofstream(dir.path / "file") << "x";
    const auto target = dir.path / "file" / "sub";
    const auto out = run_to_directory(tiny(0.0), "", target);
    CHECK(out.status == ExitCode::io_error);
    CHECK_FALSE(fs::exists(target));
  }

  TEST_CASE("solver failure keeps partial output") {
    TempDir dir;
    auto cfg = tiny(0.003);
    cfg.newton_max_iter = 1;
    cfg.newton_tol = 1e-16;
    cfg.newton_abs_tol = 1e-300;
    const auto out = run_to_directory(cfg, "", dir.path);
    CHECK(out.status == ExitCode::solver_failure);
    CHECK(lines_of(dir.path / "observables.csv").size() == 2);
    CHECK(fs::exists(dir.path / "abort_phi_0.vtk"));
    const auto manifest = lines_of(dir.path / "manifest.txt");
    CHECK(manifest.at(3) == "exit_status: 2");
  }

  TEST_CASE("failing assumptions stop before the run") {
    TempDir dir;
    auto cfg = tiny(0.003);
    cfg.functions.truncation = {"constant", {2.0}};
    const auto out = run_to_directory(cfg, "", dir.path);
    CHECK(out.status == ExitCode::config_error);
    CHECK(out.message.find("A6") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path / "observables.csv"));
  }

  TEST_CASE("sweep") {
    TempDir dir;
    const auto base = tiny(0.002);
    SweepSpec bad;
    bad.param = "theta";
    CHECK_THROWS_AS(sweep_to_directory(base, bad, dir.path), ConfigError);
    CHECK_FALSE(fs::exists(dir.path));
    bad.param = "eps";
    bad.values = {"0.1"};
    CHECK_THROWS_AS(sweep_to_directory(base, bad, dir.path), ConfigError);
    SweepSpec spec;
    spec.param = "theta";
    spec.values = {"0", "0.3", "0.5", "0.7"};
    spec.jobs = 2;
    const auto out = sweep_to_directory(base, spec, dir.path);
    CHECK(out.status == ExitCode::ok);
    REQUIRE(out.runs.size() == 4);
    for (const auto& v : spec.values) CHECK(fs::exists(dir.path / ("theta_" + v) / "observables.csv"));
    const auto cmp = lines_of(dir.path / "comparison.csv");
    CHECK(cmp.at(0) == "theta,time,tumour_measure,probeA_mean,probeA_var");
    CHECK(cmp.size() == 1 + 4 * 3);
  }

  TEST_CASE("sweep with a failing value completes the others") {
    TempDir dir;
    auto base = tiny(0.002);
    SweepSpec spec;
    spec.param = "alpha";
    spec.values = {"0", "1e9"};
    CHECK_THROWS_AS(sweep_to_directory(base, spec, dir.path), ConfigError);  // step bound
    spec.values = {"0", "100"};
    spec.paired = {{"theta", {"0.5"}}};
    CHECK_THROWS_AS(sweep_to_directory(base, spec, dir.path), ConfigError);  // length mismatch
  }
}
