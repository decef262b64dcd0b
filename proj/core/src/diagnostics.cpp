#include "oldreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace oldreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double fmt17(char* buf, std::size_t n, double x) {
  std::snprintf(buf, n, "%.17g", x);
  return x;
}

}  // namespace

InstantNorms instant_norms(const State& s, const FluidParams& fp, const Grid& g) {
  const int nx = g.nx, ny = g.ny;
  const double da = g.cell_area();
  InstantNorms out;

  double kin = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) kin += s.vel.u(i, j) * s.vel.u(i, j);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) kin += s.vel.v(i, j) * s.vel.v(i, j);
  out.kinetic_l2 = da * kin;

  double str = 0.0, tl1 = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double nsq = norm_sq(s.stress.at(i, j));
      str += nsq;
      tl1 += std::sqrt(nsq);
    }
  out.stress_l2 = da * str;

  const VelocityGradients gv = velocity_gradients(s.vel, g);
  double gvp = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double nsq = gv.d11(i, j) * gv.d11(i, j) + gv.dudy_c(i, j) * gv.dudy_c(i, j) +
                         gv.dvdx_c(i, j) * gv.dvdx_c(i, j) + gv.d22(i, j) * gv.d22(i, j);
      gvp += std::pow(nsq, 0.5 * fp.p());
    }
  out.grad_v_lp_density = da * gvp;

  // Cell-centred stress gradient by central differences (ghost cells extend
  // the interior, so wall columns see the one-sided zero-flux value).
  const Array2D* comp[3] = {&s.stress.t11, &s.stress.t12, &s.stress.t22};
  const double wgt[3] = {1.0, 2.0, 1.0};
  double gtq = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double nsq = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double gx = ((*comp[c])(i + 1, j) - (*comp[c])(i - 1, j)) / (2.0 * g.hx);
        const double gy = ((*comp[c])(i, j + 1) - (*comp[c])(i, j - 1)) / (2.0 * g.hy);
        nsq += wgt[c] * (gx * gx + gy * gy);
      }
      gtq += std::pow(nsq, 0.5 * fp.q());
    }
  out.grad_t_lq_density = da * gtq;

  out.tm = stress_mean(s.stress, g);
  out.reg_l1 = (1.0 / fp.m) * std::pow(norm_sq(out.tm), 0.5 * (fp.q() - 2.0)) * da * tl1;
  out.div_residual = max_divergence(s.vel, g);
  return out;
}

double total_energy(const State& s, const FluidParams& fp, const Grid& g) {
  const int nx = g.nx, ny = g.ny;
  double kin = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) kin += s.vel.u(i, j) * s.vel.u(i, j);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) kin += s.vel.v(i, j) * s.vel.v(i, j);
  double str = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) str += norm_sq(s.stress.at(i, j));
  return g.cell_area() * (fp.mu0 * kin + 0.5 * str);
}

EnergyRecord energy_record(const State& s, const FluidParams& fp, const Grid& g,
                           const TimeAccumulators& acc, double dt, double energy_residual) {
  const InstantNorms n = instant_norms(s, fp, g);
  EnergyRecord r;
  r.time = s.time;
  r.dt = dt;
  r.kinetic_l2 = n.kinetic_l2;
  r.stress_l2 = n.stress_l2;
  r.grad_v_lp = acc.grad_v_lp;
  r.grad_t_lq = acc.grad_t_lq;
  r.tm_11 = n.tm(0, 0);
  r.tm_12 = n.tm(0, 1);
  r.tm_22 = n.tm(1, 1);
  r.reg_l1 = n.reg_l1;
  r.div_residual = n.div_residual;
  r.energy_residual = energy_residual;
  return r;
}

void write_series_csv(std::ostream& os, const std::vector<EnergyRecord>& records) {
  os << "time,dt,kinetic_l2,stress_l2,grad_v_lp,grad_t_lq,tm_11,tm_12,tm_22,reg_l1,"
        "div_residual,energy_residual\n";
  char buf[32];
  for (const EnergyRecord& r : records) {
    const double f[12] = {r.time,  r.dt,    r.kinetic_l2,   r.stress_l2,
                          r.grad_v_lp, r.grad_t_lq, r.tm_11, r.tm_12,
                          r.tm_22, r.reg_l1, r.div_residual, r.energy_residual};
    for (int k = 0; k < 12; ++k) {
      fmt17(buf, sizeof buf, f[k]);
      os << buf << (k + 1 < 12 ? "," : "\n");
    }
  }
}

void write_series_csv(const std::string& path, const std::vector<EnergyRecord>& records) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SolverError("cannot open " + path + " for writing");
  write_series_csv(os, records);
}

InequalityReport inequality_monitor(const std::vector<EnergyRecord>& records,
                                    const FluidParams& fp, const Grid& g) {
  InequalityReport rep;
  const double p = fp.p(), q = fp.q();
  rep.corotational = (fp.a == 0.0);

  rep.exponents_ok = exponents_admissible(p, q);
  if (!rep.exponents_ok) {
    std::ostringstream note;
    if (p <= 1.2) {
      note << "p = " << p << " <= 6/5: the convective term is not controlled by the "
           << "p-dissipation and the velocity estimate does not close";
    } else if (p <= 2.0) {
      note << "q = " << q << " < 4: the kinetic-energy closure exponent 1/2 + 1/(q-2) "
           << "exceeds 1, so the Gronwall absorption fails";
    } else {
      note << "q = " << q << " <= 2p/(p-1) = " << 2.0 * p / (p - 1.0)
           << ": the gradient fixed-point exponent 1 + 2/(q-2) reaches p";
    }
    rep.note = note.str();
  }

  const double area = g.area();
  const StructuralConstants visc =
      structural_constants(fp.viscosity.mu1, fp.viscosity.kappa, fp.viscosity.p);
  const StructuralConstants diff =
      structural_constants(fp.diffusion.gamma1, fp.diffusion.kappa_t, fp.diffusion.q);
  // Coercivity offsets play the role of the integrable slack functions.
  const double phi_v = visc.coercivity_offset * area;
  const double phi_t = diff.coercivity_offset * area * fp.epsilon;
  // ||grad T||_2 <= |Omega|^{(q-2)/(2q)} ||grad T||_q for q >= 2.
  const double embed = (q >= 2.0) ? std::pow(area, (q - 2.0) / (2.0 * q)) : kNaN;

  double c_vel = std::numeric_limits<double>::infinity();
  double c_str = std::numeric_limits<double>::infinity();
  bool vel_seen = false, str_seen = false;
  double gron_integral = 0.0;
  rep.gronwall_constant = 0.0;

  auto tm_norm = [](const EnergyRecord& r) {
    return std::sqrt(r.tm_11 * r.tm_11 + 2.0 * r.tm_12 * r.tm_12 + r.tm_22 * r.tm_22);
  };

  if (!records.empty()) {
    rep.time.push_back(records.front().time);
    rep.tm_norm.push_back(tm_norm(records.front()));
    rep.gronwall_constant = tm_norm(records.front());  // bound at t=0 is C*(1+0)
  }

  for (std::size_t k = 1; k < records.size(); ++k) {
    const EnergyRecord& r0 = records[k - 1];
    const EnergyRecord& r1 = records[k];
    const double dt = r1.time - r0.time;
    if (!(dt > 0.0)) continue;

    if (r1.dt > 0.0) {
      rep.max_energy_residual = std::max(rep.max_energy_residual, r1.energy_residual);
      rep.max_residual_rate =
          std::max(rep.max_residual_rate, r1.energy_residual / (r1.dt * r1.dt));
    }

    const double d_kin = r1.kinetic_l2 - r0.kinetic_l2;
    const double d_str = r1.stress_l2 - r0.stress_l2;
    const double d_gv = std::max(0.0, r1.grad_v_lp - r0.grad_v_lp);
    const double d_gt = std::max(0.0, r1.grad_t_lq - r0.grad_t_lq);
    const double sup_v = std::sqrt(std::max(r0.kinetic_l2, r1.kinetic_l2));

    // int_step int_Omega |v||grad T| <= sup||v||_2 * embed * (d_gt)^{1/q} * dt^{1-1/q}
    const double cross = sup_v * embed * std::pow(d_gt, 1.0 / q) * std::pow(dt, 1.0 - 1.0 / q);
    // |div S| <= sqrt(2) |grad S| componentwise in 2D, hence the explicit
    // Holder coefficients below.
    const double rt2 = std::sqrt(2.0);

    {  // velocity estimate: elastic forcing bounded through the stress gradient
      const double slack = phi_v * dt + rt2 * cross - 0.5 * d_kin;
      rep.velocity_residual_at_zero = std::max(rep.velocity_residual_at_zero, -slack);
      if (d_gv > 0.0) {
        c_vel = std::min(c_vel, slack / d_gv);
        vel_seen = true;
      }
    }
    {  // stress estimate: relaxation integral on the left; production enters
       // as 2 mu0 v against div T, the coupling (zero for a = 0) as
       // 2 a v against div T^2, split through the mean stress with the
       // Poincare-type factor folded into the extra d_gt^{2/q} term
      const double tm0 = tm_norm(r0), tm1 = tm_norm(r1);
      const double coup = 2.0 * rt2 * std::abs(fp.a);
      const double cross2 =
          coup * (std::max(tm0, tm1) * cross +
                  sup_v * std::pow(d_gt, 2.0 / q) * std::pow(dt, 1.0 - 2.0 / q));
      const double slack = phi_t * dt + 2.0 * fp.mu0 * rt2 * cross + cross2 - 0.5 * d_str -
                           r0.stress_l2 * dt;
      rep.stress_residual_at_zero = std::max(rep.stress_residual_at_zero, -slack);
      if (d_gt > 0.0) {
        c_str = std::min(c_str, slack / (fp.epsilon * d_gt));
        str_seen = true;
      }
    }

    // Gronwall trajectory for the mean stress.
    gron_integral += sup_v * std::pow(d_gt, 1.0 / q) * std::pow(dt, 1.0 - 1.0 / q);
    rep.time.push_back(r1.time);
    rep.tm_norm.push_back(tm_norm(r1));
    rep.gronwall_constant = std::max(rep.gronwall_constant, tm_norm(r1) / (1.0 + gron_integral));
  }

  rep.velocity_dissipation_constant = vel_seen ? std::max(0.0, c_vel) : 0.0;
  rep.stress_dissipation_constant = str_seen ? std::max(0.0, c_str) : 0.0;

  // Re-walk to fill the dominating bound trajectory with the final constant.
  rep.gronwall_bound.resize(rep.time.size());
  {
    double integral = 0.0;
    std::size_t idx = 0;
    if (!records.empty()) rep.gronwall_bound[idx++] = rep.gronwall_constant;
    for (std::size_t k = 1; k < records.size(); ++k) {
      const EnergyRecord& r0 = records[k - 1];
      const EnergyRecord& r1 = records[k];
      const double dt = r1.time - r0.time;
      if (!(dt > 0.0)) continue;
      const double d_gt = std::max(0.0, r1.grad_t_lq - r0.grad_t_lq);
      const double sup_v = std::sqrt(std::max(r0.kinetic_l2, r1.kinetic_l2));
      integral += sup_v * std::pow(d_gt, 1.0 / q) * std::pow(dt, 1.0 - 1.0 / q);
      rep.gronwall_bound[idx++] = rep.gronwall_constant * (1.0 + integral);
    }
  }
  return rep;
}

std::string format_inequality_report(const InequalityReport& r) {
  std::ostringstream os;
  char buf[32];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << key << " = " << buf << "\n";
  };
  os << "corotational = " << (r.corotational ? "yes" : "no") << "\n";
  put("max_energy_residual", r.max_energy_residual);
  put("max_residual_rate", r.max_residual_rate);
  put("velocity_dissipation_constant", r.velocity_dissipation_constant);
  put("velocity_residual_at_zero", r.velocity_residual_at_zero);
  put("stress_dissipation_constant", r.stress_dissipation_constant);
  put("stress_residual_at_zero", r.stress_residual_at_zero);
  put("gronwall_constant", r.gronwall_constant);
  os << "exponents_ok = " << (r.exponents_ok ? "yes" : "no") << "\n";
  if (!r.note.empty()) os << "note = " << r.note << "\n";
  return os.str();
}

SweepReport m_sweep(const Scenario& base, const std::vector<double>& m_values) {
  SweepReport rep;
  rep.m_values = m_values;
  for (double m : m_values) {
    Scenario sc = base;
    sc.params.m = m;
    double reg = kNaN, sup = kNaN;
    try {
      RunResult rr = run(sc);
      reg = rr.records.empty() ? kNaN : rr.records.back().reg_l1;
      sup = 0.0;
      for (const EnergyRecord& r : rr.records)
        sup = std::max(sup, sc.params.mu0 * r.kinetic_l2 + 0.5 * r.stress_l2);
    } catch (const SolverError&) {
      // leave NaN markers; remaining sweep members still run
    }
    rep.reg_l1_finals.push_back(reg);
    rep.sup_energy.push_back(sup);
  }
  for (std::size_t k = 1; k < rep.reg_l1_finals.size(); ++k)
    rep.ratio_table.push_back(rep.reg_l1_finals[k] / rep.reg_l1_finals[k - 1]);

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool any = false;
  for (double e : rep.sup_energy)
    if (std::isfinite(e)) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      any = true;
    }
  rep.energy_spread = (any && hi > 0.0) ? (hi - lo) / hi : 0.0;
  return rep;
}

std::string format_sweep_report(const SweepReport& r) {
  std::ostringstream os;
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "m,reg_l1_final,sup_energy\n";
  for (std::size_t k = 0; k < r.m_values.size(); ++k)
    os << num(r.m_values[k]) << "," << num(r.reg_l1_finals[k]) << "," << num(r.sup_energy[k])
       << "\n";
  os << "consecutive_ratios";
  for (double x : r.ratio_table) os << " " << num(x);
  os << "\n";
  os << "energy_spread = " << num(r.energy_spread) << "\n";
  return os.str();
}

}  // namespace oldreg
