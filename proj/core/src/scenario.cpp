#include "oldreg/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace oldreg {

std::string admissibility_note(double p, double q) {
  if (exponents_admissible(p, q)) return {};
  std::ostringstream os;
  os << "exponent pair (p = " << p << ", q = " << q << ") is outside the admissible set: ";
  if (p > 1.2 && p <= 2.0)
    os << "p <= 2 requires q >= 4";
  else if (p > 2.0)
    os << "p > 2 requires q > 2p/(p-1) = " << 2.0 * p / (p - 1.0);
  else
    os << "p must exceed 6/5";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& v, int line) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw ScenarioError(line, "trailing characters after number '" + v + "'");
  return x;
}

int parse_int(const std::string& v, int line) {
  const double x = parse_real(v, line);
  const int n = static_cast<int>(x);
  if (static_cast<double>(n) != x) throw ScenarioError(line, "expected an integer, got '" + v + "'");
  return n;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ScenarioError(line, "expected a boolean, got '" + v + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ScenarioError(line, "expected 'section.key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) throw ScenarioError(line, "empty key or value");

    if (key == "grid.nx") sc.grid.nx = parse_int(val, line);
    else if (key == "grid.ny") sc.grid.ny = parse_int(val, line);
    else if (key == "grid.lx") sc.grid.lx = parse_real(val, line);
    else if (key == "grid.ly") sc.grid.ly = parse_real(val, line);
    else if (key == "time.t_end") sc.params.t_end = parse_real(val, line);
    else if (key == "time.cfl") sc.params.cfl = parse_real(val, line);
    else if (key == "fluid.epsilon") sc.params.epsilon = parse_real(val, line);
    else if (key == "fluid.mu0") sc.params.mu0 = parse_real(val, line);
    else if (key == "fluid.a") sc.params.a = parse_real(val, line);
    else if (key == "fluid.m") sc.params.m = parse_real(val, line);
    else if (key == "fluid.p") sc.params.viscosity.p = parse_real(val, line);
    else if (key == "fluid.q") sc.params.diffusion.q = parse_real(val, line);
    else if (key == "viscosity.mu1") sc.params.viscosity.mu1 = parse_real(val, line);
    else if (key == "viscosity.kappa") sc.params.viscosity.kappa = parse_real(val, line);
    else if (key == "diffusion.gamma1") sc.params.diffusion.gamma1 = parse_real(val, line);
    else if (key == "diffusion.kappa_t") sc.params.diffusion.kappa_t = parse_real(val, line);
    else if (key == "project.tol") sc.params.project_tol = parse_real(val, line);
    else if (key == "project.max_iter") sc.params.project_max_iter = parse_int(val, line);
    else if (key == "init.type") {
      if (val == "zero") sc.init = InitKind::Zero;
      else if (val == "taylor-green") sc.init = InitKind::TaylorGreen;
      else if (val == "file") sc.init = InitKind::File;
      else if (val == "random") sc.init = InitKind::Random;
      else throw ScenarioError(line, "unknown init.type '" + val + "'");
    } else if (key == "init.amplitude") sc.init_amplitude = parse_real(val, line);
    else if (key == "init.stress_11") sc.init_stress.at(0, 0) = parse_real(val, line);
    else if (key == "init.stress_12") sc.init_stress.at(0, 1) = parse_real(val, line);
    else if (key == "init.stress_22") sc.init_stress.at(1, 1) = parse_real(val, line);
    else if (key == "init.file") sc.init_file = val;
    else if (key == "output.record_interval") sc.record_interval = parse_int(val, line);
    else if (key == "output.dir") sc.out_dir = val;
    else if (key == "capture.enable") sc.capture = parse_bool(val, line);
    else if (key == "capture.field") {
      if (val == "speed") sc.capture_field = CaptureField::Speed;
      else if (val == "grad_v_norm") sc.capture_field = CaptureField::GradVNorm;
      else if (val == "t11") sc.capture_field = CaptureField::T11;
      else if (val == "t12") sc.capture_field = CaptureField::T12;
      else if (val == "t22") sc.capture_field = CaptureField::T22;
      else throw ScenarioError(line, "unknown capture.field '" + val + "'");
    } else {
      throw ScenarioError(line, "unknown key '" + key + "'");
    }
  }

  // Validation: hard invariants are errors, the exponent-admissibility range
  // is advisory only (the solver runs fine outside it).
  if (sc.grid.nx < 4 || sc.grid.ny < 4) throw ScenarioError(0, "grid.nx and grid.ny must be >= 4");
  if (!(sc.grid.lx > 0.0) || !(sc.grid.ly > 0.0)) throw ScenarioError(0, "grid extents must be positive");
  sc.grid = Grid(sc.grid.nx, sc.grid.ny, sc.grid.lx, sc.grid.ly);

  const FluidParams& fp = sc.params;
  if (!(fp.epsilon > 0.0)) throw ScenarioError(0, "fluid.epsilon must be > 0");
  if (!(fp.mu0 > 0.0)) throw ScenarioError(0, "fluid.mu0 must be > 0");
  if (!(fp.a >= -1.0 && fp.a <= 1.0)) throw ScenarioError(0, "fluid.a must lie in [-1, 1]");
  if (!(fp.m >= 1.0)) throw ScenarioError(0, "fluid.m must be >= 1");
  if (!(fp.viscosity.mu1 > 0.0)) throw ScenarioError(0, "viscosity.mu1 must be > 0");
  if (!(fp.viscosity.kappa > 0.0)) throw ScenarioError(0, "viscosity.kappa must be > 0");
  if (!(fp.viscosity.p > 1.0)) throw ScenarioError(0, "fluid.p must be > 1");
  if (!(fp.diffusion.gamma1 > 0.0)) throw ScenarioError(0, "diffusion.gamma1 must be > 0");
  if (!(fp.diffusion.kappa_t > 0.0)) throw ScenarioError(0, "diffusion.kappa_t must be > 0");
  if (!(fp.diffusion.q > 1.0)) throw ScenarioError(0, "fluid.q must be > 1");
  if (!(fp.t_end >= 0.0)) throw ScenarioError(0, "time.t_end must be >= 0");
  if (!(fp.cfl > 0.0 && fp.cfl <= 1.0)) throw ScenarioError(0, "time.cfl must lie in (0, 1]");
  if (!(fp.project_tol > 0.0)) throw ScenarioError(0, "project.tol must be > 0");
  if (fp.project_max_iter < 1) throw ScenarioError(0, "project.max_iter must be >= 1");
  if (sc.record_interval < 1) throw ScenarioError(0, "output.record_interval must be >= 1");
  if (sc.init == InitKind::File && sc.init_file.empty())
    throw ScenarioError(0, "init.type = file requires init.file");

  sc.admissible = exponents_admissible(fp.p(), fp.q());
  if (!sc.admissible) sc.warning = admissibility_note(fp.p(), fp.q());
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace oldreg
