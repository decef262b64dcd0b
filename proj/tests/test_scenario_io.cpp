#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "oldreg/checkpoint.hpp"
#include "oldreg/diagnostics.hpp"
#include "oldreg/scenario.hpp"

using namespace oldreg;

namespace {

std::filesystem::path temp_dir() {
  const auto d = std::filesystem::temp_directory_path() / "oldreg_io_test";
  std::filesystem::create_directories(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("empty scenario text yields the documented defaults") {
  const Scenario sc = parse_scenario("");
  CHECK(sc.grid.nx == 64);
  CHECK(sc.grid.ny == 64);
  CHECK(sc.grid.lx == 1.0);
  CHECK(sc.params.p() == 2.0);
  CHECK(sc.params.q() == 4.0);
  CHECK(sc.params.a == 0.0);
  CHECK(sc.params.m == 1.0);
  CHECK(sc.params.epsilon == 0.1);
  CHECK(sc.params.mu0 == 1.0);
  CHECK(sc.params.viscosity.mu1 == 1.0);
  CHECK(sc.params.viscosity.kappa == 0.1);
  CHECK(sc.params.diffusion.gamma1 == 1.0);
  CHECK(sc.params.diffusion.kappa_t == 0.1);
  CHECK(sc.params.cfl == 0.4);
  CHECK(sc.params.project_tol == 1e-10);
  CHECK(sc.init == InitKind::Zero);
  CHECK(sc.record_interval == 1);
  CHECK_FALSE(sc.capture);
  CHECK(sc.admissible);
  CHECK(sc.warning.empty());
}

TEST_CASE("assignments, comments and later-wins ordering") {
  const Scenario sc = parse_scenario(
      "# comment line\n"
      "grid.nx = 32\n"
      "grid.ny = 16\n"
      "fluid.p = 1.8\n"
      "fluid.q = 4.5\n"
      "fluid.m = 4\n"
      "time.t_end = 0.25\n"
      "init.type = taylor-green\n"
      "init.amplitude = 0.5\n"
      "init.stress_11 = 0.3   # trailing comment\n"
      "\n"
      "time.t_end = 0.5\n");
  CHECK(sc.grid.nx == 32);
  CHECK(sc.grid.ny == 16);
  CHECK(sc.params.p() == 1.8);
  CHECK(sc.params.q() == 4.5);
  CHECK(sc.params.m == 4.0);
  CHECK(sc.params.t_end == 0.5);  // later assignment wins
  CHECK(sc.init == InitKind::TaylorGreen);
  CHECK(sc.init_amplitude == 0.5);
  CHECK(sc.init_stress(0, 0) == 0.3);
  CHECK(sc.admissible);
}

TEST_CASE("parser errors carry the offending line number") {
  try {
    parse_scenario("grid.nx = 32\nnot an assignment\n");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  try {
    parse_scenario("grid.nx = 32\n\nfluid.nosuchkey = 1\n");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 3);  // unknown keys are typo guards, not ignored
  }

  try {
    parse_scenario("grid.nx = twelve\n");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 1);
  }
}

TEST_CASE("invariant violations are rejected") {
  CHECK_THROWS_AS(parse_scenario("fluid.a = 1.5\n"), ScenarioError);   // |a| <= 1
  CHECK_THROWS_AS(parse_scenario("fluid.a = -1.5\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("fluid.m = 0.5\n"), ScenarioError);   // m >= 1
  CHECK_THROWS_AS(parse_scenario("fluid.p = 1.0\n"), ScenarioError);   // p > 1
  CHECK_THROWS_AS(parse_scenario("fluid.epsilon = -0.1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("grid.nx = 2\n"), ScenarioError);     // >= 4 cells
  CHECK_THROWS_AS(parse_scenario("time.cfl = 0\n"), ScenarioError);
  CHECK_NOTHROW(parse_scenario("fluid.a = -1\nfluid.m = 1\n"));        // closed endpoints
}

TEST_CASE("inadmissible exponent pairs warn but do not fail") {
  const Scenario sc = parse_scenario("fluid.p = 1.8\nfluid.q = 2.5\n");
  CHECK_FALSE(sc.admissible);
  CHECK_FALSE(sc.warning.empty());

  const Scenario ok = parse_scenario("fluid.p = 1.8\nfluid.q = 4\n");
  CHECK(ok.admissible);

  // p <= 6/5 never closes.
  const Scenario low = parse_scenario("fluid.p = 1.15\nfluid.q = 9\n");
  CHECK_FALSE(low.admissible);
}

TEST_CASE("init selector spellings") {
  CHECK(parse_scenario("init.type = zero\n").init == InitKind::Zero);
  CHECK(parse_scenario("init.type = taylor-green\n").init == InitKind::TaylorGreen);
  CHECK(parse_scenario("init.type = random\n").init == InitKind::Random);
  const Scenario f = parse_scenario("init.type = file\ninit.file = some/path.txt\n");
  CHECK(f.init == InitKind::File);
  CHECK(f.init_file == "some/path.txt");
  CHECK_THROWS_AS(parse_scenario("init.type = vortex-sheet\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("init.type = file\n"), ScenarioError);  // needs init.file
}

TEST_CASE("capture field selector spellings") {
  CHECK(parse_scenario("capture.enable = true\n").capture);
  CHECK_FALSE(parse_scenario("capture.enable = false\n").capture);
  CHECK(parse_scenario("capture.field = speed\n").capture_field == CaptureField::Speed);
  CHECK(parse_scenario("capture.field = grad_v_norm\n").capture_field == CaptureField::GradVNorm);
  CHECK(parse_scenario("capture.field = t11\n").capture_field == CaptureField::T11);
  CHECK(parse_scenario("capture.field = t12\n").capture_field == CaptureField::T12);
  CHECK(parse_scenario("capture.field = t22\n").capture_field == CaptureField::T22);
  CHECK_THROWS_AS(parse_scenario("capture.field = vorticity\n"), ScenarioError);
}

TEST_CASE("load_scenario reads files and reports missing ones") {
  const auto dir = temp_dir();
  const auto path = dir / "scene.txt";
  std::ofstream(path) << "grid.nx = 8\ngrid.ny = 8\n";
  CHECK(load_scenario(path.string()).grid.nx == 8);
  CHECK_THROWS_AS(load_scenario((dir / "missing.txt").string()), ScenarioError);
}

TEST_CASE("checkpoint round-trip is bytewise stable and restores the state") {
  const auto dir = temp_dir();
  const Grid g(12, 10, 1.0, 0.8);
  State s(g);
  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 1; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) s.vel.u(i, j) = uni(rng);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 1; j < g.ny; ++j) s.vel.v(i, j) = uni(rng);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      s.pressure(i, j) = uni(rng);
      SymTensor2 t;
      for (int k = 0; k < SymTensor2::ncomp; ++k) t.comp(k) = uni(rng);
      s.stress.set(i, j, t);
    }
  apply_boundary(s, g);
  s.time = 0.123456789123456789;

  const auto p1 = dir / "ck1.txt";
  const auto p2 = dir / "ck2.txt";
  write_checkpoint(p1.string(), s, g);
  const Checkpoint ck = read_checkpoint(p1.string());
  CHECK(ck.grid.nx == g.nx);
  CHECK(ck.grid.ny == g.ny);
  CHECK(ck.grid.lx == g.lx);
  CHECK(ck.grid.ly == g.ly);
  CHECK(ck.state.time == s.time);
  // Interior samples restored exactly (17 significant digits round-trip).
  CHECK(ck.state.vel.u.data() == s.vel.u.data());
  CHECK(ck.state.vel.v.data() == s.vel.v.data());
  CHECK(ck.state.stress.t11.data() == s.stress.t11.data());
  CHECK(ck.state.pressure.data() == s.pressure.data());

  write_checkpoint(p2.string(), ck.state, ck.grid);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1).substr(0, 8) == "OLDREG1 ");
}

TEST_CASE("checkpoint read failures are reported") {
  const auto dir = temp_dir();
  CHECK_THROWS_AS(read_checkpoint((dir / "absent.txt").string()), CheckpointError);

  const auto bad = dir / "bad_header.txt";
  std::ofstream(bad) << "NOTACKPT 4 4 1 1 0\n";
  CHECK_THROWS_AS(read_checkpoint(bad.string()), CheckpointError);

  // Truncated body: header promises more rows than the file holds.
  const Grid g(6, 6, 1.0, 1.0);
  State s(g);
  const auto full = dir / "full.txt";
  write_checkpoint(full.string(), s, g);
  std::string text = slurp(full);
  text.resize(text.size() / 2);
  const auto cut = dir / "cut.txt";
  std::ofstream(cut, std::ios::binary) << text;
  CHECK_THROWS_AS(read_checkpoint(cut.string()), CheckpointError);
}

TEST_CASE("file-based initial state restores and validates the grid") {
  const auto dir = temp_dir();
  const Grid g(8, 8, 1.0, 1.0);
  State s(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) s.stress.t11(i, j) = 0.25;
  apply_boundary(s, g);
  s.time = 0.5;
  const auto path = dir / "restart.txt";
  write_checkpoint(path.string(), s, g);

  Scenario sc;
  sc.grid = g;
  sc.init = InitKind::File;
  sc.init_file = path.string();
  const State r = initial_state(sc);
  CHECK(r.time == 0.5);
  CHECK(r.stress.t11(3, 3) == 0.25);

  Scenario wrong = sc;
  wrong.grid = Grid(16, 16, 1.0, 1.0);
  // A mismatched restart grid is a scenario-level inconsistency.
  CHECK_THROWS_AS(initial_state(wrong), ScenarioError);
}

TEST_CASE("identical scenarios reproduce byte-identical series output") {
  Scenario sc;
  sc.grid = Grid(12, 12, 1.0, 1.0);
  sc.init = InitKind::Random;
  sc.seed = 99;
  sc.init_amplitude = 0.5;
  sc.params.t_end = 0.002;
  sc.params.diffusion.q = 4.0;

  const auto dir = temp_dir();
  const auto pa = dir / "series_a.csv";
  const auto pb = dir / "series_b.csv";
  write_series_csv(pa.string(), run(sc).records);
  write_series_csv(pb.string(), run(sc).records);
  const std::string a = slurp(pa);
  CHECK(a == slurp(pb));
  CHECK(a.find("time,dt,") == 0);
  CHECK(a.find('\r') == std::string::npos);  // binary mode: LF only
}
