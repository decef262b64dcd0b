#include "oldreg/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oldreg {

std::vector<int> cylinder_radii(const SpaceTimeField& f) {
  std::vector<int> radii{0};
  for (int rho = 1; rho <= std::max(f.nx, f.ny); rho *= 2) radii.push_back(rho);
  return radii;
}

int temporal_index_radius(const SpaceTimeField& f, double alpha, int rho) {
  const double h = std::min(f.hx, f.hy);
  return static_cast<int>(std::llround(alpha * (rho * h) * (rho * h) / f.dt));
}

double power_mean_finish(double mean, double s) {
  if (s == 1.0) return mean;
  if (s == 2.0) return std::sqrt(mean);
  return std::pow(mean, 1.0 / s);
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Summed-volume table: S(n,i,j) = sum of g over [0,n) x [0,i) x [0,j).
class VolumeTable {
public:
  explicit VolumeTable(const SpaceTimeField& g)
      : nt_(g.nt), nx_(g.nx), ny_(g.ny),
        s_(static_cast<std::size_t>(nt_ + 1) * (nx_ + 1) * (ny_ + 1), 0.0) {
    for (int n = 0; n < nt_; ++n)
      for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
          at(n + 1, i + 1, j + 1) = g(n, i, j) + at(n, i + 1, j + 1) + at(n + 1, i, j + 1) +
                                    at(n + 1, i + 1, j) - at(n, i, j + 1) - at(n, i + 1, j) -
                                    at(n + 1, i, j) + at(n, i, j);
  }

  // Inclusive box [n0,n1] x [i0,i1] x [j0,j1], already clipped to the domain.
  double box_sum(int n0, int n1, int i0, int i1, int j0, int j1) const {
    ++n1, ++i1, ++j1;
    return at(n1, i1, j1) - at(n0, i1, j1) - at(n1, i0, j1) - at(n1, i1, j0) + at(n0, i0, j1) +
           at(n0, i1, j0) + at(n1, i0, j0) - at(n0, i0, j0);
  }

private:
  double at(int n, int i, int j) const {
    return s_[(static_cast<std::size_t>(n) * (nx_ + 1) + i) * (ny_ + 1) + j];
  }
  double& at(int n, int i, int j) {
    return s_[(static_cast<std::size_t>(n) * (nx_ + 1) + i) * (ny_ + 1) + j];
  }
  int nt_, nx_, ny_;
  std::vector<double> s_;
};

// Sliding max over the clipped window [k-r, k+r] (van Herk two-pass on a
// -inf padded copy, so border windows are simply shorter).
void sliding_max_1d(const double* in, int n, int r, double* out) {
  if (r <= 0) {
    std::copy(in, in + n, out);
    return;
  }
  const int w = 2 * r + 1;
  const int np = ((n + 2 * r + w - 1) / w) * w;
  static thread_local std::vector<double> pad, lmax, rmax;
  pad.assign(np, kNegInf);
  std::copy(in, in + n, pad.begin() + r);
  lmax.resize(np);
  rmax.resize(np);
  for (int b = 0; b < np; b += w) {
    lmax[b] = pad[b];
    for (int k = b + 1; k < b + w; ++k) lmax[k] = std::max(lmax[k - 1], pad[k]);
    rmax[b + w - 1] = pad[b + w - 1];
    for (int k = b + w - 2; k >= b; --k) rmax[k] = std::max(rmax[k + 1], pad[k]);
  }
  for (int k = 0; k < n; ++k) out[k] = std::max(rmax[k], lmax[k + 2 * r]);
}

void max_filter_3d(SpaceTimeField& g, int rt, int rx, int ry) {
  const int nt = g.nt, nx = g.nx, ny = g.ny;
  std::vector<double> line(std::max({nt, nx, ny})), res(line.size());
  if (ry > 0)
    for (int n = 0; n < nt; ++n)
      for (int i = 0; i < nx; ++i) {
        double* base = &g.a[g.idx(n, i, 0)];
        sliding_max_1d(base, ny, ry, res.data());
        std::copy(res.begin(), res.begin() + ny, base);
      }
  if (rx > 0)
    for (int n = 0; n < nt; ++n)
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) line[i] = g(n, i, j);
        sliding_max_1d(line.data(), nx, rx, res.data());
        for (int i = 0; i < nx; ++i) g(n, i, j) = res[i];
      }
  if (rt > 0)
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        for (int n = 0; n < nt; ++n) line[n] = g(n, i, j);
        sliding_max_1d(line.data(), nt, rt, res.data());
        for (int n = 0; n < nt; ++n) g(n, i, j) = res[n];
      }
}

}  // namespace

SpaceTimeField parabolic_maximal(const SpaceTimeField& f, double alpha, double s) {
  const int nt = f.nt, nx = f.nx, ny = f.ny;

  SpaceTimeField g0 = f;
  for (double& x : g0.a) x = (s == 1.0) ? std::abs(x) : (s == 2.0 ? x * x : std::pow(std::abs(x), s));
  const VolumeTable table(g0);

  SpaceTimeField out = f;
  for (double& x : out.a) x = std::abs(x);  // singleton cylinders

  for (int rho : cylinder_radii(f)) {
    if (rho == 0) continue;
    const int rt = temporal_index_radius(f, alpha, rho);

    SpaceTimeField mean = f;
    for (int n = 0; n < nt; ++n) {
      const int n0 = std::max(0, n - rt), n1 = std::min(nt - 1, n + rt);
      for (int i = 0; i < nx; ++i) {
        const int i0 = std::max(0, i - rho), i1 = std::min(nx - 1, i + rho);
        for (int j = 0; j < ny; ++j) {
          const int j0 = std::max(0, j - rho), j1 = std::min(ny - 1, j + rho);
          const double cnt = double(n1 - n0 + 1) * (i1 - i0 + 1) * (j1 - j0 + 1);
          mean(n, i, j) = table.box_sum(n0, n1, i0, i1, j0, j1) / cnt;
        }
      }
    }
    max_filter_3d(mean, rt, rho, rho);
    for (std::size_t k = 0; k < out.a.size(); ++k)
      out.a[k] = std::max(out.a[k], power_mean_finish(mean.a[k], s));
  }
  return out;
}

double superlevel_measure(const SpaceTimeField& g, double lambda) {
  std::size_t count = 0;
  for (double x : g.a) count += (x > lambda);
  return g.cell_measure() * static_cast<double>(count);
}

LevelSetReport weak_bound_check(const SpaceTimeField& f, double p, double alpha,
                                const std::vector<double>& lambda_values) {
  LevelSetReport rep;
  rep.lambda_values = lambda_values;
  const SpaceTimeField m = parabolic_maximal(f, alpha, 1.0);
  double fp_norm = 0.0;
  for (double x : f.a) fp_norm += std::pow(std::abs(x), p);
  fp_norm *= f.cell_measure();
  for (double lam : lambda_values) {
    const double meas = superlevel_measure(m, lam);
    rep.measures.push_back(meas);
    const double c = fp_norm > 0.0 ? std::pow(lam, p) * meas / fp_norm : 0.0;
    rep.weak_constants.push_back(c);
    rep.max_constant = std::max(rep.max_constant, c);
  }
  return rep;
}

TruncationResult clamp_truncate(const VectorSpaceTimeField& u, double lambda, double alpha) {
  const SpaceTimeField& ux = u.x;
  const int nt = ux.nt, nx = ux.nx, ny = ux.ny;

  // Forward-difference gradient samples: every spatially adjacent pair is
  // covered by the sample at its lower or far-edge point.
  SpaceTimeField grad = ux;
  const SpaceTimeField* comp[2] = {&u.x, &u.y};
  for (int n = 0; n < nt; ++n)
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        double nsq = 0.0;
        for (const SpaceTimeField* c : comp) {
          const int i1 = (i + 1 < nx) ? i + 1 : i, i0 = (i + 1 < nx) ? i : i - 1;
          const int j1 = (j + 1 < ny) ? j + 1 : j, j0 = (j + 1 < ny) ? j : j - 1;
          const double dx = (nx > 1) ? ((*c)(n, i1, j) - (*c)(n, i0, j)) / ux.hx : 0.0;
          const double dy = (ny > 1) ? ((*c)(n, i, j1) - (*c)(n, i, j0)) / ux.hy : 0.0;
          nsq += dx * dx + dy * dy;
        }
        grad(n, i, j) = std::sqrt(nsq);
      }

  const SpaceTimeField m = parabolic_maximal(grad, alpha, 1.0);

  TruncationResult res;
  res.field = u;
  res.bad = ux;
  std::size_t bad_count = 0;
  for (std::size_t k = 0; k < m.a.size(); ++k) {
    const bool bad = m.a[k] > lambda;
    res.bad.a[k] = bad ? 1.0 : 0.0;
    if (bad) {
      res.field.x.a[k] = 0.0;
      res.field.y.a[k] = 0.0;
      ++bad_count;
    }
  }
  res.bad_measure = ux.cell_measure() * static_cast<double>(bad_count);

  // One Jacobi averaging pass across the bad set only; good points are
  // never written, so the output matches the input there bitwise.
  if (bad_count > 0) {
    const SpaceTimeField zx = res.field.x, zy = res.field.y;
    for (int n = 0; n < nt; ++n)
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          if (res.bad(n, i, j) == 0.0) continue;
          double sx = 0.0, sy = 0.0;
          int cnt = 0;
          const int dn[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0},
                                {0, 1, 0},  {0, 0, -1}, {0, 0, 1}};
          for (const auto& d : dn) {
            const int nn = n + d[0], ii = i + d[1], jj = j + d[2];
            if (nn < 0 || nn >= nt || ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
            sx += zx(nn, ii, jj);
            sy += zy(nn, ii, jj);
            ++cnt;
          }
          if (cnt > 0) {
            res.field.x(n, i, j) = sx / cnt;
            res.field.y(n, i, j) = sy / cnt;
          }
        }
  }

  // Measured Lipschitz constant in the parabolic metric.
  const double dist_t = std::sqrt(ux.dt / alpha);
  double lip = 0.0;
  for (int n = 0; n < nt; ++n)
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const double ax = res.field.x(n, i, j), ay = res.field.y(n, i, j);
        if (i + 1 < nx)
          lip = std::max(lip, std::hypot(res.field.x(n, i + 1, j) - ax,
                                         res.field.y(n, i + 1, j) - ay) / ux.hx);
        if (j + 1 < ny)
          lip = std::max(lip, std::hypot(res.field.x(n, i, j + 1) - ax,
                                         res.field.y(n, i, j + 1) - ay) / ux.hy);
        if (n + 1 < nt)
          lip = std::max(lip, std::hypot(res.field.x(n + 1, i, j) - ax,
                                         res.field.y(n + 1, i, j) - ay) / dist_t);
      }
  res.lipschitz_constant = lip;
  return res;
}

namespace {

SpaceTimeField trajectory_frame(const std::vector<State>& snaps, const Grid& g) {
  const int nt = static_cast<int>(snaps.size());
  double dt = 1.0;
  if (nt > 1) dt = (snaps.back().time - snaps.front().time) / (nt - 1);
  if (!(dt > 0.0)) dt = 1.0;
  SpaceTimeField f(nt, g.nx, g.ny, dt, g.hx, g.hy);
  f.t0 = snaps.empty() ? 0.0 : snaps.front().time;
  f.x0 = 0.5 * g.hx;
  f.y0 = 0.5 * g.hy;
  return f;
}

}  // namespace

SpaceTimeField capture_scalar(const std::vector<State>& snaps, const Grid& g,
                              CaptureField which) {
  SpaceTimeField f = trajectory_frame(snaps, g);
  for (int n = 0; n < f.nt; ++n) {
    const State& s = snaps[n];
    if (which == CaptureField::GradVNorm) {
      const VelocityGradients gv = velocity_gradients(s.vel, g);
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
          f(n, i, j) = std::sqrt(gv.d11(i, j) * gv.d11(i, j) + gv.dudy_c(i, j) * gv.dudy_c(i, j) +
                                 gv.dvdx_c(i, j) * gv.dvdx_c(i, j) + gv.d22(i, j) * gv.d22(i, j));
      continue;
    }
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        switch (which) {
          case CaptureField::Speed:
            f(n, i, j) = std::hypot(0.5 * (s.vel.u(i, j) + s.vel.u(i + 1, j)),
                                    0.5 * (s.vel.v(i, j) + s.vel.v(i, j + 1)));
            break;
          case CaptureField::T11: f(n, i, j) = s.stress.t11(i, j); break;
          case CaptureField::T12: f(n, i, j) = s.stress.t12(i, j); break;
          case CaptureField::T22: f(n, i, j) = s.stress.t22(i, j); break;
          case CaptureField::GradVNorm: break;  // handled above
        }
      }
  }
  return f;
}

VectorSpaceTimeField capture_velocity(const std::vector<State>& snaps, const Grid& g) {
  VectorSpaceTimeField vf;
  vf.x = trajectory_frame(snaps, g);
  vf.y = vf.x;
  for (int n = 0; n < vf.x.nt; ++n) {
    const State& s = snaps[n];
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        vf.x(n, i, j) = 0.5 * (s.vel.u(i, j) + s.vel.u(i + 1, j));
        vf.y(n, i, j) = 0.5 * (s.vel.v(i, j) + s.vel.v(i, j + 1));
      }
  }
  return vf;
}

}  // namespace oldreg
