#include "oldreg/grid.hpp"

#include <algorithm>
#include <cmath>

namespace oldreg {

void apply_velocity_boundary(StaggeredVelocityField& vel, const Grid& g) {
  // Normal components on the walls are genuine unknowns pinned to zero.
  for (int j = 0; j < g.ny; ++j) {
    vel.u(0, j) = 0.0;
    vel.u(g.nx, j) = 0.0;
  }
  for (int i = 0; i < g.nx; ++i) {
    vel.v(i, 0) = 0.0;
    vel.v(i, g.ny) = 0.0;
  }
  // Tangential ghosts mirror with a sign so the wall value (face average)
  // is exactly zero.
  for (int i = 0; i <= g.nx; ++i) {
    vel.u(i, -1) = -vel.u(i, 0);
    vel.u(i, g.ny) = -vel.u(i, g.ny - 1);
  }
  for (int j = 0; j <= g.ny; ++j) {
    vel.v(-1, j) = -vel.v(0, j);
    vel.v(g.nx, j) = -vel.v(g.nx - 1, j);
  }
}

void apply_stress_boundary(SymTensorField& ts, const Grid& g) {
  for (Array2D* c : {&ts.t11, &ts.t12, &ts.t22}) {
    Array2D& a = *c;
    for (int j = 0; j < g.ny; ++j) {
      a(-1, j) = a(0, j);
      a(g.nx, j) = a(g.nx - 1, j);
    }
    for (int i = 0; i < g.nx; ++i) {
      a(i, -1) = a(i, 0);
      a(i, g.ny) = a(i, g.ny - 1);
    }
    // Corner ghosts mirror across both walls.
    a(-1, -1) = a(0, 0);
    a(g.nx, -1) = a(g.nx - 1, 0);
    a(-1, g.ny) = a(0, g.ny - 1);
    a(g.nx, g.ny) = a(g.nx - 1, g.ny - 1);
  }
}

SymTensor2 stress_mean(const SymTensorField& ts, const Grid& g) {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      s11 += ts.t11(i, j);
      s12 += ts.t12(i, j);
      s22 += ts.t22(i, j);
    }
  const double inv = 1.0 / (static_cast<double>(g.nx) * g.ny);
  SymTensor2 m;
  m.at(0, 0) = s11 * inv;
  m.at(0, 1) = s12 * inv;
  m.at(1, 1) = s22 * inv;
  return m;
}

double max_divergence(const StaggeredVelocityField& vel, const Grid& g) {
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = (vel.u(i + 1, j) - vel.u(i, j)) / g.hx +
                       (vel.v(i, j + 1) - vel.v(i, j)) / g.hy;
      m = std::max(m, std::abs(d));
    }
  return m;
}

}  // namespace oldreg
