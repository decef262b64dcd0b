#include "oldreg/mms.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace oldreg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Time profiles of the velocity (g) and stress (s) parts.
double gt(double t) { return 1.0 + 0.25 * std::sin(t); }
double gt_p(double t) { return 0.25 * std::cos(t); }
double st(double t) { return 1.0 + 0.5 * std::cos(t); }
double st_p(double t) { return -0.5 * std::sin(t); }

// Pointwise bundle of the exact fields and their derivatives.
struct Point {
  double u, v, u_t, u_x, u_y, v_t, v_x, v_y, lap_u, lap_v;
  double t11, t12, t22;
  double t11_t, t11_x, t11_y, lap_t11;
  double t12_t, t12_x, t12_y, lap_t12;
  double t22_t, t22_x, t22_y, lap_t22;
};

Point eval(const ManufacturedSolution& ms, double x, double y, double t) {
  const double g = gt(t), gp = gt_p(t), s = st(t), sp = st_p(t);
  const double s1x = std::sin(kPi * x), c1x = std::cos(kPi * x);
  const double s2x = std::sin(2.0 * kPi * x), c2x = std::cos(2.0 * kPi * x);
  const double s1y = std::sin(kPi * y), c1y = std::cos(kPi * y);
  const double s2y = std::sin(2.0 * kPi * y), c2y = std::cos(2.0 * kPi * y);
  const double pi2 = kPi * kPi;

  Point p;
  const double U = ms.u0;
  p.u = U * s1x * s1x * s2y * g;
  p.v = -U * s2x * s1y * s1y * g;
  p.u_t = U * s1x * s1x * s2y * gp;
  p.v_t = -U * s2x * s1y * s1y * gp;
  p.u_x = U * kPi * s2x * s2y * g;
  p.u_y = 2.0 * kPi * U * s1x * s1x * c2y * g;
  p.v_x = -2.0 * kPi * U * c2x * s1y * s1y * g;
  p.v_y = -kPi * U * s2x * s2y * g;
  p.lap_u = U * g * (2.0 * pi2 * c2x * s2y - 4.0 * pi2 * s1x * s1x * s2y);
  p.lap_v = U * g * (4.0 * pi2 * s2x * s1y * s1y - 2.0 * pi2 * s2x * c2y);

  const double S = ms.s0;
  p.t11 = S * c1x * c1y * s;
  p.t12 = 0.5 * S * c2x * c1y * s;
  p.t22 = 0.75 * S * c1x * c2y * s;
  p.t11_t = S * c1x * c1y * sp;
  p.t12_t = 0.5 * S * c2x * c1y * sp;
  p.t22_t = 0.75 * S * c1x * c2y * sp;
  p.t11_x = -kPi * S * s1x * c1y * s;
  p.t11_y = -kPi * S * c1x * s1y * s;
  p.t12_x = -kPi * S * s2x * c1y * s;
  p.t12_y = -0.5 * kPi * S * c2x * s1y * s;
  p.t22_x = -0.75 * kPi * S * s1x * c2y * s;
  p.t22_y = -1.5 * kPi * S * c1x * s2y * s;
  p.lap_t11 = -2.0 * pi2 * p.t11;
  p.lap_t12 = -5.0 * pi2 * p.t12;
  p.lap_t22 = -5.0 * pi2 * p.t22;
  return p;
}

}  // namespace

double ManufacturedSolution::exact_u(double x, double y, double t) const {
  const double s1x = std::sin(kPi * x);
  return u0 * s1x * s1x * std::sin(2.0 * kPi * y) * gt(t);
}

double ManufacturedSolution::exact_v(double x, double y, double t) const {
  const double s1y = std::sin(kPi * y);
  return -u0 * std::sin(2.0 * kPi * x) * s1y * s1y * gt(t);
}

SymTensor2 ManufacturedSolution::exact_stress(double x, double y, double t) const {
  SymTensor2 r;
  r.at(0, 0) = s0 * std::cos(kPi * x) * std::cos(kPi * y) * st(t);
  r.at(0, 1) = 0.5 * s0 * std::cos(2.0 * kPi * x) * std::cos(kPi * y) * st(t);
  r.at(1, 1) = 0.75 * s0 * std::cos(kPi * x) * std::cos(2.0 * kPi * y) * st(t);
  return r;
}

double ManufacturedSolution::force_u(double x, double y, double t) const {
  const Point p = eval(*this, x, y, t);
  return p.u_t + p.u * p.u_x + p.v * p.u_y - 0.5 * mu1 * p.lap_u - (p.t11_x + p.t12_y);
}

double ManufacturedSolution::force_v(double x, double y, double t) const {
  const Point p = eval(*this, x, y, t);
  return p.v_t + p.u * p.v_x + p.v * p.v_y - 0.5 * mu1 * p.lap_v - (p.t12_x + p.t22_y);
}

SymTensor2 ManufacturedSolution::force_stress(double x, double y, double t) const {
  const Point p = eval(*this, x, y, t);
  const double w12 = 0.5 * (p.u_y - p.v_x);
  const double d11 = p.u_x, d22 = p.v_y, d12 = 0.5 * (p.u_y + p.v_x);
  // B at a = 0 (pure rotation coupling)
  const double b11 = 2.0 * w12 * p.t12;
  const double b12 = w12 * (p.t22 - p.t11);
  const double b22 = -2.0 * w12 * p.t12;
  const double relax = 1.0 + 1.0 / m;  // mean stress is exactly zero, q = 2

  SymTensor2 f;
  f.at(0, 0) = p.t11_t + p.u * p.t11_x + p.v * p.t11_y - epsilon * gamma1 * p.lap_t11 +
               relax * p.t11 - 2.0 * mu0 * d11 - b11;
  f.at(0, 1) = p.t12_t + p.u * p.t12_x + p.v * p.t12_y - epsilon * gamma1 * p.lap_t12 +
               relax * p.t12 - 2.0 * mu0 * d12 - b12;
  f.at(1, 1) = p.t22_t + p.u * p.t22_x + p.v * p.t22_y - epsilon * gamma1 * p.lap_t22 +
               relax * p.t22 - 2.0 * mu0 * d22 - b22;
  return f;
}

ManufacturedCase manufactured_case() {
  ManufacturedCase c;
  const ManufacturedSolution sol = c.sol;

  c.params.epsilon = sol.epsilon;
  c.params.mu0 = sol.mu0;
  c.params.a = 0.0;
  c.params.m = sol.m;  // well above |v|, so the cutoff stays at 1
  c.params.viscosity = {sol.mu1, 0.1, 2.0};
  c.params.diffusion = {sol.gamma1, 0.1, 2.0};

  auto f = std::make_shared<Forcing>();
  f->fu = [sol](double x, double y, double t) { return sol.force_u(x, y, t); };
  f->fv = [sol](double x, double y, double t) { return sol.force_v(x, y, t); };
  f->fstress = [sol](double x, double y, double t) { return sol.force_stress(x, y, t); };
  c.params.forcing = std::move(f);
  return c;
}

State sampled_state(const ManufacturedSolution& sol, const Grid& g, double t) {
  State s(g);
  s.time = t;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) s.vel.u(i, j) = sol.exact_u(g.xf(i), g.yc(j), t);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s.vel.v(i, j) = sol.exact_v(g.xc(i), g.yf(j), t);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s.stress.set(i, j, sol.exact_stress(g.xc(i), g.yc(j), t));
  apply_boundary(s, g);
  return s;
}

FieldErrors manufactured_errors(const State& s, const ManufacturedSolution& sol, const Grid& g) {
  FieldErrors e;
  double vel = 0.0, str = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      const double d = s.vel.u(i, j) - sol.exact_u(g.xf(i), g.yc(j), s.time);
      vel += d * d;
    }
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = s.vel.v(i, j) - sol.exact_v(g.xc(i), g.yf(j), s.time);
      vel += d * d;
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const SymTensor2 d = s.stress.at(i, j) - sol.exact_stress(g.xc(i), g.yc(j), s.time);
      str += norm_sq(d);
    }
  e.velocity = std::sqrt(g.cell_area() * vel);
  e.stress = std::sqrt(g.cell_area() * str);
  e.combined = std::sqrt(g.cell_area() * (vel + str));
  return e;
}

State advance_fixed_dt(const ManufacturedCase& c, const Grid& g, double dt, double t_end) {
  State s = sampled_state(c.sol, g, 0.0);
  while (s.time < t_end - 1e-14 * t_end) {
    const double h = std::min(dt, t_end - s.time);
    s = step(s, c.params, g, h);
  }
  return s;
}

double state_difference(const State& a, const State& b, const Grid& g) {
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      const double d = a.vel.u(i, j) - b.vel.u(i, j);
      acc += d * d;
    }
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = a.vel.v(i, j) - b.vel.v(i, j);
      acc += d * d;
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) acc += norm_sq(a.stress.at(i, j) - b.stress.at(i, j));
  return std::sqrt(g.cell_area() * acc);
}

SpatialConvergence spatial_convergence(const ManufacturedCase& c, const std::vector<int>& grids,
                                       double dt, double t_end) {
  SpatialConvergence out;
  out.grids = grids;
  for (int n : grids) {
    const Grid g(n, n, 1.0, 1.0);
    const State s = advance_fixed_dt(c, g, dt, t_end);
    out.errors.push_back(manufactured_errors(s, c.sol, g).combined);
  }
  for (std::size_t k = 1; k < out.errors.size(); ++k) {
    const double ratio = out.errors[k - 1] / out.errors[k];
    const double href = double(grids[k]) / grids[k - 1];
    out.orders.push_back(std::log(ratio) / std::log(href));
  }
  // least-squares slope of log(err) against log(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int npts = static_cast<int>(grids.size());
  for (int k = 0; k < npts; ++k) {
    const double x = std::log(1.0 / grids[k]);
    const double y = std::log(out.errors[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  out.fitted_order = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  return out;
}

TemporalConvergence temporal_convergence(const ManufacturedCase& c, int n,
                                         const std::vector<double>& dts, double t_end) {
  TemporalConvergence out;
  out.dts = dts;
  const Grid g(n, n, 1.0, 1.0);
  std::vector<State> finals;
  for (double dt : dts) finals.push_back(advance_fixed_dt(c, g, dt, t_end));
  for (std::size_t k = 1; k < finals.size(); ++k)
    out.diffs.push_back(state_difference(finals[k - 1], finals[k], g));
  for (std::size_t k = 1; k < out.diffs.size(); ++k)
    out.orders.push_back(std::log(out.diffs[k - 1] / out.diffs[k]) /
                         std::log(dts[k - 1] / dts[k]));
  if (out.diffs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int npts = static_cast<int>(out.diffs.size());
    for (int k = 0; k < npts; ++k) {
      const double x = std::log(dts[k]);
      const double y = std::log(out.diffs[k]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    out.fitted_order = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  } else if (out.orders.size() == 1) {
    out.fitted_order = out.orders[0];
  }
  return out;
}

std::string format_spatial(const SpatialConvergence& t) {
  std::ostringstream os;
  char buf[64];
  os << "grid,error,order\n";
  for (std::size_t k = 0; k < t.grids.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,", t.grids[k], t.errors[k]);
    os << buf;
    if (k == 0)
      os << "-";
    else {
      std::snprintf(buf, sizeof buf, "%.17g", t.orders[k - 1]);
      os << buf;
    }
    os << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.17g", t.fitted_order);
  os << "fitted_order = " << buf << "\n";
  return os.str();
}

std::string format_temporal(const TemporalConvergence& t) {
  std::ostringstream os;
  char buf[64];
  os << "dt,diff,order\n";
  for (std::size_t k = 0; k < t.dts.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,", t.dts[k]);
    os << buf;
    if (k + 1 < t.dts.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", t.diffs[k]);
      os << buf;
    } else {
      os << "-";
    }
    os << ",";
    if (k >= 1 && k - 1 < t.orders.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", t.orders[k - 1]);
      os << buf;
    } else {
      os << "-";
    }
    os << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.17g", t.fitted_order);
  os << "fitted_order = " << buf << "\n";
  return os.str();
}

}  // namespace oldreg
