#include <doctest.h>

#include <cmath>
#include <cstring>

#include "phenopf/simulation.hpp"
#include "phenopf/sparse.hpp"

using namespace phenopf;

namespace {

SimulationConfig small_config(std::size_t nx, double t_end) {
  auto cfg = paper_config();
  cfg.nx = nx;
  cfg.t_end = t_end;
  return cfg;
}

bool same_bits(const ObservableRecord& a, const ObservableRecord& b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_SUITE("sim-driver-observables") {
  TEST_CASE("initial state") {
    Simulation sim(small_config(120, 0.0));
    const auto s = sim.initial_state();
    const auto& mesh = sim.operators().mesh;
    CHECK(s.ch.phi.values[mesh.node_index(60, 60)] == 1.0);
    CHECK(s.ch.phi.values[mesh.node_index(0, 0)] == -1.0);
    for (std::size_t k : {0u, 17u, 500u, 7000u, 9000u, 12000u, 14000u, 14500u, 14640u, 3u})
      CHECK(std::abs(moment(s.f.node(k), [](double) { return 1.0; }, sim.grid()) - 1.0) <= 1e-12);
    for (double v : s.sigma.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  TEST_CASE("degenerate disk") {
    auto cfg = small_config(8, 0.0);
    cfg.ic_phi.disk_radius_sq = 0.0;
    Simulation sim(cfg);
    const auto s = sim.initial_state();
    const auto centre = sim.operators().mesh.node_index(4, 4);
    for (std::size_t k = 0; k < s.ch.phi.values.size(); ++k)
      CHECK(s.ch.phi.values[k] == (k == centre ? 1.0 : -1.0));
  }

  TEST_CASE("tumour measure") {
    const auto m = build_uniform_mesh(64);
    const std::size_t n = m.node_count();
    CHECK(tumour_measure({FieldTag::phi, std::vector<double>(n, 1.0)}, m, -0.9) == doctest::Approx(1.0));
    CHECK(tumour_measure({FieldTag::phi, std::vector<double>(n, -1.0)}, m, -0.9) == 0.0);
    const auto half = interpolate([](double x, double) { return 2 * x - 1; }, m, FieldTag::phi);
    CHECK(std::abs(tumour_measure(half, m, 0.0) - 0.5) <= 1e-12);
    // diagonal level line cuts triangles through their interiors
    const auto diag = interpolate([](double x, double y) { return x + 0.5 * y - 0.6; }, m, FieldTag::phi);
    // area of {x + y/2 > 0.6} = 1 - (area below) = 1 - (0.6 + 0.1)/2
    CHECK(std::abs(tumour_measure(diag, m, 0.0) - (1.0 - 0.35)) <= 1e-12);
  }

  TEST_CASE("energy values") {
    const FemOperators ops(build_uniform_mesh(4));
    const std::size_t n = ops.mesh.node_count();
    CHECK(std::abs(energy({FieldTag::phi, std::vector<double>(n, 1.0)}, ops, 0.01)) <= 1e-12);
    CHECK(energy({FieldTag::phi, std::vector<double>(n, 0.0)}, ops, 0.01) == doctest::Approx(25.0));
  }

  TEST_CASE("one step from the reference initial state") {
    const auto cfg = small_config(16, 1e-3);
    Simulation sim(cfg);
    const auto s0 = sim.initial_state();
    const auto g = sim.source(s0);
    const auto s1 = sim.advance(s0);
    const auto r = sim.observe(s1);
    CHECK(r.tumour_measure >= 0.0);
    CHECK(r.tumour_measure <= 1.0);
    const auto& lm = sim.operators().lumped_mass;
    const double before = dot(lm, s0.ch.phi.values), after = dot(lm, s1.ch.phi.values);
    CHECK(std::abs(after - before - cfg.dt * dot(lm, g)) <= 1e-10);
    CHECK(sim.last_diagnostics().mass_balance_defect <= 1e-10);
    CHECK(s1.time == doctest::Approx(cfg.dt));
  }

  TEST_CASE("runs are deterministic") {
    const auto cfg = small_config(8, 0.005);
    const auto a = run(cfg), b = run(cfg);
    REQUIRE(a.records.size() == 6);
    for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(same_bits(a.records[k], b.records[k]));
  }

  TEST_CASE("zero duration gives a single record") {
    const auto r = run(small_config(8, 0.0));
    CHECK(r.records.size() == 1);
    CHECK(r.diagnostics.empty());
    CHECK(r.records[0].time == 0.0);
  }

  TEST_CASE("frozen phenotypes keep probe statistics") {
    auto cfg = small_config(16, 0.01);
    cfg.alpha = 0.0;
    const auto r = run(cfg);
    for (const auto& rec : r.records) {
      for (int p = 0; p < 3; ++p) {
        CHECK(rec.probes[p].variance == r.records[0].probes[p].variance);
        CHECK(rec.probes[p].mean == r.records[0].probes[p].mean);
      }
    }
  }

  TEST_CASE("decoupled limit is pure Cahn-Hilliard") {
    auto cfg = small_config(12, 0.005);
    cfg.alpha = 0.0;
    cfg.b = 0.0;
    cfg.functions.p_rate = {"constant", {0.0}};
    cfg.functions.q_rate = {"constant", {0.0}};
    cfg.functions.k_rate = {"constant", {0.0}};
    Simulation sim(cfg);
    SimulationState s;
    const auto& ops = sim.operators();
    s.ch.phi = interpolate([](double x, double y) { return std::sin(6 * x) * std::cos(5 * y); }, ops.mesh,
                           FieldTag::phi);
    s.ch.mu = initial_mu(s.ch.phi, cfg.eps, ops, sigma_controls(cfg));
    s.f = uniform_field(std::make_shared<PhenotypeGrid>(sim.grid()), ops.mesh.node_count(),
                        initial_distribution(sim.grid(), 2.5, 1.75));
    s.sigma = {FieldTag::sigma, std::vector<double>(ops.mesh.node_count(), 0.7)};
    ChSolver ch(ops, ChParams{cfg.m_mob, cfg.eps, cfg.dt}, ch_controls(cfg));
    ChState ref = s.ch;
    const std::vector<double> zero(ops.mesh.node_count(), 0.0);
    for (int k = 0; k < 5; ++k) {
      s = sim.advance(s);
      ref = ch.step(ref, zero);
    }
    CHECK(s.f.values == uniform_field(s.f.grid, ops.mesh.node_count(),
                                      initial_distribution(sim.grid(), 2.5, 1.75)).values);
    for (double v : s.sigma.values) CHECK(std::abs(v - 0.7) <= 1e-12);
    double diff = 0.0;
    for (std::size_t i = 0; i < ref.phi.values.size(); ++i)
      diff = std::max(diff, std::abs(ref.phi.values[i] - s.ch.phi.values[i]));
    CHECK(diff <= 1e-10);
  }

  TEST_CASE("short reference run keeps the monitors") {
    auto cfg = small_config(16, 0.05);
    const auto r = run(cfg);
    for (const auto& d : r.diagnostics) {
      CHECK(d.fmass_err <= 1e-10);
      CHECK(d.mass_balance_defect <= 1e-10);
      CHECK(d.f_min >= 0.0);
      CHECK(d.sigma_min >= -1e-8);
      CHECK(d.sigma_max <= 1.0 + 1e-8);
    }
    for (const auto& rec : r.records) {
      CHECK(rec.ifw_min == doctest::Approx(1.0));
      CHECK(rec.ifw_max == doctest::Approx(1.0));
    }
    // the mesh is symmetric about both diagonals, and so is the disk
    CHECK(diagonal_asymmetry(r.final_state.ch.phi, build_uniform_mesh(16)) <= 1e-10);
  }

  TEST_CASE("solver failure aborts the run with the last good state") {
    auto cfg = small_config(8, 0.003);
    cfg.newton_max_iter = 1;
    cfg.newton_tol = 1e-16;
    cfg.newton_abs_tol = 1e-300;
    Simulation sim(cfg);
    bool aborted = false;
    RunHooks hooks;
    hooks.on_abort = [&](const SimulationState& s, const std::string& msg) {
      aborted = true;
      CHECK(s.step == 0);
      CHECK(msg.find("step 1") != std::string::npos);
    };
    CHECK_THROWS_AS(run(sim, sim.initial_state(), cfg.step_count(), hooks), RunAborted);
    CHECK(aborted);
  }
}
