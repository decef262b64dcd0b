#include "oldreg/constitutive.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>
#include <vector>

namespace oldreg {

StructuralConstants structural_constants(double amplitude, double shift, double exponent) {
  StructuralConstants c;
  const double p = exponent;
  if (p <= 2.0) {
    // (shift^2 + s^2)^((p-2)/2) >= (2 s^2)^((p-2)/2) for s >= shift (negative
    // exponent flips the inequality); below s = shift the offset absorbs the gap.
    c.coercivity_constant = amplitude * std::pow(2.0, 0.5 * (p - 2.0));
    c.coercivity_offset = c.coercivity_constant * std::pow(shift, p);
    // (shift^2 + s^2)^((p-2)/2) <= s^(p-2), again by the flipped inequality.
    c.growth_constant = amplitude;
    c.growth_offset = 0.0;
  } else {
    c.coercivity_constant = amplitude;
    c.coercivity_offset = 0.0;
    // max(a,b)^r <= a^r + b^r for r >= 0, then kappa^(p-2) s <= kappa^(p-2) (s <= 1)
    // or <= kappa^(p-2) s^(p-1) (s > 1).
    const double two_r = std::pow(2.0, 0.5 * (p - 2.0));
    const double shift_r = std::pow(shift, p - 2.0);
    c.growth_constant = amplitude * two_r * (1.0 + shift_r);
    c.growth_offset = amplitude * two_r * shift_r;
  }
  return c;
}

namespace {

// Shared verification loop.  `Arg` provides norm_sq/flux/pairing through the
// traits object; the checks themselves are identical for both laws.
template <typename Arg, typename Traits>
AssumptionReport verify_impl(const Traits& tr, double amplitude, double shift, double exponent,
                             int samples, std::uint64_t seed, bool strict_monotone) {
  AssumptionReport rep;
  rep.law = tr.name;
  rep.exponent = exponent;
  const StructuralConstants sc = structural_constants(amplitude, shift, exponent);
  rep.coercivity_constant = sc.coercivity_constant;
  rep.coercivity_offset = sc.coercivity_offset;
  rep.growth_constant = sc.growth_constant;
  rep.growth_offset = sc.growth_offset;

  std::vector<Arg> args = tr.corner_cases();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  while (static_cast<int>(args.size()) < samples) args.push_back(tr.random(rng, uni));
  if (args.size() % 2 != 0) args.push_back(tr.random(rng, uni));
  rep.samples = static_cast<int>(args.size());

  rep.min_monotonicity = std::numeric_limits<double>::infinity();
  for (const Arg& a : args) {
    const double ns = tr.nsq(a);
    const double n = std::sqrt(ns);
    const double coef = tr.coefficient(ns);
    const double flux_norm = coef * n;

    // p-coercivity: coef * |A|^2 >= c |A|^p - offset, up to a rounding guard.
    const double lhs = coef * ns;
    const double rhs = sc.coercivity_constant * std::pow(n, exponent) - sc.coercivity_offset;
    const double guard = 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
    if (lhs < rhs - guard) ++rep.violations;

    // (p-1)-growth: |flux| <= c |A|^(p-1) + offset.
    const double grhs = sc.growth_constant * std::pow(n, exponent - 1.0) + sc.growth_offset;
    if (flux_norm > grhs + 1e-9 * (1.0 + flux_norm + grhs)) ++rep.violations;
    rep.max_growth_ratio =
        std::max(rep.max_growth_ratio, flux_norm / (std::pow(n, exponent - 1.0) + 1.0));
  }

  for (std::size_t k = 0; k + 1 < args.size(); k += 2) {
    const Arg& a1 = args[k];
    const Arg& a2 = args[k + 1];
    if (tr.equal(a1, a2)) {
      ++rep.pairs_skipped;
      continue;
    }
    const double pairing = tr.monotonicity(a1, a2);
    ++rep.pairs_evaluated;
    rep.min_monotonicity = std::min(rep.min_monotonicity, pairing);
    if (strict_monotone ? (pairing <= 0.0) : (pairing < -1e-12 * (1.0 + std::abs(pairing))))
      ++rep.violations;
  }
  if (rep.pairs_evaluated == 0) rep.min_monotonicity = 0.0;
  return rep;
}

struct ViscosityTraits {
  const ViscosityLaw& law;
  const char* name = "viscosity";

  double nsq(const SymTensor3& a) const { return norm_sq(a); }
  double coefficient(double ns) const { return viscosity_coefficient(law, ns); }
  bool equal(const SymTensor3& a, const SymTensor3& b) const {
    for (int k = 0; k < SymTensor3::ncomp; ++k)
      if (a.comp(k) != b.comp(k)) return false;
    return true;
  }
  double monotonicity(const SymTensor3& a, const SymTensor3& b) const {
    const SymTensor3 fa = viscous_stress(law, a);
    const SymTensor3 fb = viscous_stress(law, b);
    return ddot(fa - fb, a - b);
  }
  SymTensor3 random(std::mt19937_64& rng, std::uniform_real_distribution<double>& uni) const {
    SymTensor3 t;
    for (int k = 0; k < SymTensor3::ncomp; ++k) t.comp(k) = uni(rng);
    return t;
  }
  std::vector<SymTensor3> corner_cases() const {
    std::vector<SymTensor3> cs;
    SymTensor3 zero;
    SymTensor3 tiny;
    for (int k = 0; k < SymTensor3::ncomp; ++k) tiny.comp(k) = (k % 2 ? -1e-8 : 1e-8);
    SymTensor3 axis;
    axis.at(0, 0) = 1.0;
    SymTensor3 axis_big;
    axis_big.at(1, 1) = 10.0;
    SymTensor3 axis_tiny;
    axis_tiny.at(0, 1) = 1e-8;
    SymTensor3 diag;
    diag.at(0, 0) = 1.0;
    diag.at(1, 1) = 2.0;
    diag.at(2, 2) = 3.0;
    // Pairs are formed consecutively; (diag, diag) is the mandated identical
    // pair that the monotonicity loop must skip.
    cs.push_back(zero);
    cs.push_back(tiny);
    cs.push_back(axis);
    cs.push_back(axis_big);
    cs.push_back(axis_tiny);
    cs.push_back(2.0 * axis_tiny);
    cs.push_back(diag);
    cs.push_back(diag);
    return cs;
  }
};

struct DiffusionTraits {
  const DiffusionLaw& law;
  const char* name = "diffusion";

  double nsq(const Rank3<3>& a) const { return norm_sq(a); }
  double coefficient(double ns) const { return diffusivity_coefficient(law, ns); }
  bool equal(const Rank3<3>& a, const Rank3<3>& b) const { return a.e == b.e; }
  double monotonicity(const Rank3<3>& a, const Rank3<3>& b) const {
    const Rank3<3> fa = diffusive_flux(law, a);
    const Rank3<3> fb = diffusive_flux(law, b);
    double s = 0.0;
    for (int k = 0; k < Rank3<3>::ncomp; ++k) s += (fa.e[k] - fb.e[k]) * (a.e[k] - b.e[k]);
    return s;
  }
  Rank3<3> random(std::mt19937_64& rng, std::uniform_real_distribution<double>& uni) const {
    Rank3<3> g;
    for (double& x : g.e) x = uni(rng);
    return g;
  }
  std::vector<Rank3<3>> corner_cases() const {
    std::vector<Rank3<3>> cs;
    Rank3<3> zero;
    Rank3<3> tiny;
    for (int k = 0; k < Rank3<3>::ncomp; ++k) tiny.e[k] = (k % 2 ? -1e-8 : 1e-8);
    Rank3<3> axis;
    axis(0, 0, 0) = 1.0;
    Rank3<3> axis_big;
    axis_big(1, 2, 0) = 10.0;
    Rank3<3> axis_tiny;
    axis_tiny(2, 1, 1) = 1e-8;
    Rank3<3> axis_tiny2 = axis_tiny;
    axis_tiny2(2, 1, 1) = 2e-8;
    Rank3<3> mixed;
    for (int k = 0; k < Rank3<3>::ncomp; ++k) mixed.e[k] = 0.25 * (k % 5) - 0.5;
    cs.push_back(zero);
    cs.push_back(tiny);
    cs.push_back(axis);
    cs.push_back(axis_big);
    cs.push_back(axis_tiny);
    cs.push_back(axis_tiny2);
    cs.push_back(mixed);
    cs.push_back(mixed);  // identical pair, must be skipped
    return cs;
  }
};

}  // namespace

AssumptionReport verify_viscosity(const ViscosityLaw& law, int samples, std::uint64_t seed) {
  ViscosityTraits tr{law};
  return verify_impl<SymTensor3>(tr, law.mu1, law.kappa, law.p, samples, seed,
                                 /*strict_monotone=*/true);
}

AssumptionReport verify_diffusion(const DiffusionLaw& law, int samples, std::uint64_t seed) {
  DiffusionTraits tr{law};
  return verify_impl<Rank3<3>>(tr, law.gamma1, law.kappa_t, law.q, samples, seed,
                               /*strict_monotone=*/false);
}

std::string format_report(const AssumptionReport& rep) {
  char buf[128];
  std::string out;
  auto put_str = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  auto put_int = [&](const char* key, long long value) {
    std::snprintf(buf, sizeof(buf), "%lld", value);
    put_str(key, buf);
  };
  auto put_real = [&](const char* key, double value) {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    put_str(key, buf);
  };
  put_str("law", rep.law);
  put_real("exponent", rep.exponent);
  put_int("samples", rep.samples);
  put_int("pairs_evaluated", rep.pairs_evaluated);
  put_int("pairs_skipped", rep.pairs_skipped);
  put_int("violations", rep.violations);
  put_real("min_monotonicity", rep.min_monotonicity);
  put_real("coercivity_constant", rep.coercivity_constant);
  put_real("coercivity_offset", rep.coercivity_offset);
  put_real("growth_constant", rep.growth_constant);
  put_real("growth_offset", rep.growth_offset);
  put_real("max_growth_ratio", rep.max_growth_ratio);
  return out;
}

}  // namespace oldreg
