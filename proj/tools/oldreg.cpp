// Command-line front end: scenario runs, constitutive-assumption checks,
// the regularization m-sweep, manufactured-solution convergence studies and
// parabolic level-set diagnostics.  Exit codes: 0 success, 1 validation
// failure, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oldreg/checkpoint.hpp"
#include "oldreg/diagnostics.hpp"
#include "oldreg/maximal.hpp"
#include "oldreg/mms.hpp"
#include "oldreg/solver.hpp"

namespace {

namespace fs = std::filesystem;
using namespace oldreg;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Scenario load_with_overrides(const std::string& path, const std::string& out_dir,
                             std::uint64_t seed, bool seed_set) {
  Scenario sc = load_scenario(path);
  if (!out_dir.empty()) sc.out_dir = out_dir;
  if (seed_set) sc.seed = seed;
  if (!sc.warning.empty()) std::cerr << "warning: " << sc.warning << "\n";
  return sc;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SolverError("cannot open " + path.string() + " for writing");
  os << text;
}

int cmd_run(const Scenario& sc) {
  const fs::path out(sc.out_dir);
  fs::create_directories(out);

  RunResult rr = run(sc);
  write_series_csv((out / "series.csv").string(), rr.records);
  write_checkpoint((out / "final_checkpoint.txt").string(), rr.final_state, sc.grid);
  const InequalityReport rep = inequality_monitor(rr.records, sc.params, sc.grid);
  write_text(out / "inequality_report.txt", format_inequality_report(rep));

  if (sc.capture) {
    const SpaceTimeField f = capture_scalar(rr.snapshots, sc.grid, sc.capture_field);
    std::ostringstream os;
    os << "nt = " << f.nt << "\ndt = " << fmt(f.dt) << "\n";
    write_text(out / "capture_info.txt", os.str());
  }

  std::cout << "steps recorded: " << rr.records.size() << "\n"
            << "final time:     " << fmt(rr.final_state.time) << "\n"
            << "max divergence: " << fmt(rr.records.back().div_residual) << "\n"
            << "outputs in " << out.string() << "\n";
  return 0;
}

int cmd_verify(const Scenario& sc, int samples, std::uint64_t seed, const std::string& out_dir) {
  const AssumptionReport rv = verify_viscosity(sc.params.viscosity, samples, seed);
  const AssumptionReport rd = verify_diffusion(sc.params.diffusion, samples, seed + 1);
  const std::string text = format_report(rv) + "\n" + format_report(rd);
  std::cout << text;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "assumptions.txt", text);
  }
  return (rv.violations == 0 && rd.violations == 0) ? 0 : kExitValidation;
}

int cmd_sweep(const Scenario& sc, const std::vector<double>& m_values) {
  const fs::path out(sc.out_dir);
  fs::create_directories(out);
  const SweepReport rep = m_sweep(sc, m_values);
  const std::string text = format_sweep_report(rep);
  write_text(out / "sweep.csv", text);
  std::cout << text;
  for (double r : rep.reg_l1_finals)
    if (!std::isfinite(r)) return kExitNumerical;
  return 0;
}

int cmd_mms(const std::vector<int>& grids, double dt, double t_end, int temporal_grid,
            double temporal_dt0, const std::string& out_dir) {
  const ManufacturedCase c = manufactured_case();
  const SpatialConvergence sp = spatial_convergence(c, grids, dt, t_end);
  const std::vector<double> dts{temporal_dt0, temporal_dt0 / 2.0, temporal_dt0 / 4.0};
  const TemporalConvergence tm = temporal_convergence(c, temporal_grid, dts, t_end);

  const std::string text = format_spatial(sp) + "\n" + format_temporal(tm);
  std::cout << text;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "mms_spatial.csv", format_spatial(sp));
    write_text(fs::path(out_dir) / "mms_temporal.csv", format_temporal(tm));
  }
  return 0;
}

int cmd_maximal(Scenario sc, double alpha, double p, int n_lambda) {
  const fs::path out(sc.out_dir);
  fs::create_directories(out);

  sc.capture = true;  // need the trajectory regardless of the scenario flag
  RunResult rr = run(sc);
  const SpaceTimeField f = capture_scalar(rr.snapshots, sc.grid, sc.capture_field);

  double fmax = 0.0;
  for (double x : f.a) fmax = std::max(fmax, std::abs(x));
  if (fmax == 0.0) fmax = 1.0;
  std::vector<double> lambdas;
  for (int k = 0; k < n_lambda; ++k)
    lambdas.push_back(fmax * std::pow(10.0, -3.0 + 3.0 * k / (n_lambda - 1.0)));

  const LevelSetReport rep = weak_bound_check(f, p, alpha, lambdas);
  std::ostringstream os;
  os << "lambda,measure,weak_constant\n";
  for (std::size_t k = 0; k < rep.lambda_values.size(); ++k)
    os << fmt(rep.lambda_values[k]) << "," << fmt(rep.measures[k]) << ","
       << fmt(rep.weak_constants[k]) << "\n";
  write_text(out / "levelsets.csv", os.str());
  std::cout << os.str() << "max_constant = " << fmt(rep.max_constant) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularized viscoelastic flow toolbox"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  auto add_common = [&](CLI::App* cmd, bool scenario_required) {
    auto* s = cmd->add_option("--scenario", scenario_path, "scenario file");
    if (scenario_required) s->required();
    cmd->add_option("--out", out_dir, "output directory (overrides scenario)");
    cmd->add_option("--seed", seed, "random seed (overrides scenario)")
        ->each([&](const std::string&) { seed_set = true; });
  };

  auto* c_run = app.add_subcommand("run", "advance a scenario and write diagnostics");
  add_common(c_run, true);

  auto* c_verify = app.add_subcommand("verify-assumptions",
                                      "sample-check coercivity/growth/monotonicity of the laws");
  add_common(c_verify, false);
  int samples = 10000;
  c_verify->add_option("--samples", samples, "tensor samples per law");

  auto* c_sweep = app.add_subcommand("m-sweep", "regularization decay across cutoff levels");
  add_common(c_sweep, true);
  std::vector<double> m_values{1, 2, 4, 8, 16};
  c_sweep->add_option("--m-values", m_values, "cutoff levels");

  auto* c_mms = app.add_subcommand("mms-convergence",
                                   "manufactured-solution convergence orders");
  c_mms->add_option("--out", out_dir, "output directory");
  std::vector<int> grids{16, 32, 64};
  double mms_dt = 1e-5, mms_t_end = 0.02, temporal_dt0 = 2e-4;
  int temporal_grid = 64;
  c_mms->add_option("--grids", grids, "spatial refinement grids");
  c_mms->add_option("--dt", mms_dt, "fixed step for the spatial study");
  c_mms->add_option("--t-end", mms_t_end, "final time");
  c_mms->add_option("--temporal-grid", temporal_grid, "grid for the temporal study");
  c_mms->add_option("--temporal-dt0", temporal_dt0, "coarsest step of the temporal study");

  auto* c_max = app.add_subcommand("maximal-diagnostics",
                                   "level-set scan of the parabolic maximal function");
  add_common(c_max, true);
  double alpha = 1.0, lp = 2.0;
  int n_lambda = 13;
  c_max->add_option("--alpha", alpha, "cylinder scaling");
  c_max->add_option("--p", lp, "weak-type exponent");
  c_max->add_option("--lambdas", n_lambda, "sweep length (3 decades, log-spaced)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) {
      return cmd_run(load_with_overrides(scenario_path, out_dir, seed, seed_set));
    }
    if (c_verify->parsed()) {
      Scenario sc;  // documented defaults when no scenario is given
      if (!scenario_path.empty()) sc = load_with_overrides(scenario_path, out_dir, seed, seed_set);
      return cmd_verify(sc, samples, seed, out_dir);
    }
    if (c_sweep->parsed()) {
      return cmd_sweep(load_with_overrides(scenario_path, out_dir, seed, seed_set), m_values);
    }
    if (c_mms->parsed()) {
      return cmd_mms(grids, mms_dt, mms_t_end, temporal_grid, temporal_dt0, out_dir);
    }
    if (c_max->parsed()) {
      return cmd_maximal(load_with_overrides(scenario_path, out_dir, seed, seed_set), alpha, lp,
                         n_lambda);
    }
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
