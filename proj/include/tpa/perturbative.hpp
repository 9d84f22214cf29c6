#pragma once

// Closed-form per-velocity solution of the population-matrix equations,
// order by order in 1/Δ, for the components that feed the upper-level
// population. Works in any consistent frequency unit: γ, δ, Ω (in ctx) and
// φ₁, φ₂, Δ (in Coupling) must share it.
//
// Harmonic n of an entry multiplies e^{inkz}. The velocity enters through
// kv = Ω/2.

#include <complex>
#include <compare>
#include <map>

#include "tpa/core.hpp"

namespace tpa::perturbative {

template <typename Real = double>
struct Coupling {
  Real phi1;
  Real phi2;
  Real mu;
  Real delta_big;
};

/// Coupling in normalized units (γ = 1).
template <typename Real = double>
Coupling<Real> coupling(const NormalizedParams& p) {
  return {static_cast<Real>(p.phi1()), static_cast<Real>(p.phi2()), static_cast<Real>(p.mu),
          static_cast<Real>(p.delta_big_tilde)};
}

struct HarmonicKey {
  int i;
  int j;
  int n;
  auto operator<=>(const HarmonicKey&) const = default;
};

/// The coefficients a given order defines. Entries absent from `terms` are
/// not provided at that order, which is different from being zero.
template <typename Real = double>
struct PerturbativeComponents {
  int order = 0;
  std::map<HarmonicKey, std::complex<Real>> terms;

  bool has(int i, int j, int n) const { return terms.contains({i, j, n}); }
  std::complex<Real> at(int i, int j, int n) const { return terms.at({i, j, n}); }
};

/// ρ₁₁ = 1 and nothing else populated.
template <typename Real = double>
PerturbativeComponents<Real> order0() {
  PerturbativeComponents<Real> out{0, {}};
  out.terms[{1, 1, 0}] = Real(1);
  out.terms[{0, 0, 0}] = Real(0);
  out.terms[{2, 2, 0}] = Real(0);
  out.terms[{2, 1, 0}] = Real(0);
  out.terms[{0, 1, 0}] = Real(0);
  out.terms[{2, 0, 0}] = Real(0);
  return out;
}

/// One-photon coherences at first order: ρ₀₁ = −(2/Δ)E, ρ₂₀ = 0.
template <typename Real = double>
PerturbativeComponents<Real> order1_coherences(const PerVelocityContext<Real>&,
                                               const Coupling<Real>& c) {
  PerturbativeComponents<Real> out{1, {}};
  out.terms[{0, 1, 1}] = -Real(2) * c.phi1 / c.delta_big;
  out.terms[{0, 1, -1}] = Real(2) * c.phi2 / c.delta_big;
  out.terms[{2, 0, 1}] = Real(0);
  out.terms[{2, 0, -1}] = Real(0);
  return out;
}

/// Two-photon coherence ρ₂₁ at first order (harmonics 0, ±2); the
/// populations vanish at this order.
template <typename Real = double>
PerturbativeComponents<Real> order1_twophoton(const PerVelocityContext<Real>& ctx,
                                              const Coupling<Real>& c) {
  using Complex = std::complex<Real>;
  const Complex I(0, 1);
  const Real big = c.delta_big;
  PerturbativeComponents<Real> out{1, {}};
  out.terms[{2, 1, 2}] = -Real(2) * I * c.mu * c.phi1 * c.phi1 / (big * ctx.d_plus);
  out.terms[{2, 1, 0}] = Real(4) * I * c.mu * c.phi1 * c.phi2 / (big * ctx.d_zero);
  out.terms[{2, 1, -2}] = -Real(2) * I * c.mu * c.phi2 * c.phi2 / (big * ctx.d_minus);
  for (int lvl = 0; lvl < 3; ++lvl) out.terms[{lvl, lvl, 0}] = Real(0);
  return out;
}

/// Second-order terms: ρ₂₀ (n = ±1, ±3), ρ₀₁ (±1, ±3), ρ₂₂ (0, ±2),
/// ρ₀₀ (0, ±2) and ρ₂₁ (0, ±2). The e^{±4ikz} parts of ρ₂₂ are not built.
template <typename Real = double>
PerturbativeComponents<Real> order2_components(const PerVelocityContext<Real>& ctx,
                                               const Coupling<Real>& c) {
  using Complex = std::complex<Real>;
  const Complex I(0, 1);
  const Real g = ctx.gamma;
  const Real kv = ctx.omega / Real(2);
  const Complex dp = ctx.d_plus, dm = ctx.d_minus, d0 = ctx.d_zero;
  const Real p1 = c.phi1, p2 = c.phi2, mu = c.mu, mu2 = c.mu * c.mu;
  const Real p1s = p1 * p1, p2s = p2 * p2;
  const Real inv_d2 = Real(1) / (c.delta_big * c.delta_big);

  PerturbativeComponents<Real> out{2, {}};

  const Complex a20 = Real(4) * I * mu * inv_d2;
  out.terms[{2, 0, 3}] = a20 * (-p1s * p2 / dp);
  out.terms[{2, 0, 1}] = a20 * (p1s * p1 / dp + Real(2) * p1 * p2s / d0);
  out.terms[{2, 0, -1}] = -a20 * (p2s * p2 / dm + Real(2) * p1s * p2 / d0);
  out.terms[{2, 0, -3}] = a20 * (p1 * p2s / dm);

  // The (γ + D±)φ/(2μ²) pieces are multiplied through by μ² so μ = 0 is safe.
  const Complex a01 = Real(4) * I * inv_d2;
  out.terms[{0, 1, 3}] = a01 * mu2 * (-p1s * p2 / dp);
  out.terms[{0, 1, 1}] =
      a01 * ((g + dp) * p1 / Real(2) + mu2 * (p1s * p1 / dp + Real(2) * p1 * p2s / d0));
  out.terms[{0, 1, -1}] =
      -a01 * ((g + dm) * p2 / Real(2) + mu2 * (p2s * p2 / dm + Real(2) * p1s * p2 / d0));
  out.terms[{0, 1, -3}] = a01 * mu2 * (p1 * p2s / dm);

  const Complex upper = Real(4) * mu2 * inv_d2 / g *
                        (p1s * p1s / dp + p2s * p2s / dm + Real(4) * p1s * p2s / d0);
  out.terms[{2, 2, 0}] = Real(2) * upper.real();
  const Complex upper2 = -Real(16) * mu2 * p1 * p2 * inv_d2 * (Complex(g, kv) / Complex(g, -2 * kv)) *
                         (p1s / (std::conj(d0) * dp) + p2s / (d0 * std::conj(dm)));
  out.terms[{2, 2, 2}] = upper2;
  out.terms[{2, 2, -2}] = std::conj(upper2);

  out.terms[{0, 0, 0}] = Real(8) * inv_d2 * (p1s + p2s);
  const Complex lower2 = -Real(8) * inv_d2 * (Complex(g, kv) / Complex(g, 2 * kv)) * p1 * p2;
  out.terms[{0, 0, 2}] = lower2;
  out.terms[{0, 0, -2}] = std::conj(lower2);

  const Real m1 = mu2 - Real(1);
  out.terms[{2, 1, 0}] = Real(4) * mu * p1 * p2 * inv_d2 / d0 *
                         (g + d0 + m1 * (Real(2) * (p1s + p2s) / d0 + p1s / dp + p2s / dm));
  out.terms[{2, 1, 2}] = -Real(2) * mu * p1s * inv_d2 / d0 *
                         (g + dp + Real(2) * m1 * (Real(2) * p2s / d0 + (p1s + p2s) / dm));
  out.terms[{2, 1, -2}] = -Real(2) * mu * p2s * inv_d2 / d0 *
                          (g + dm + Real(2) * m1 * (Real(2) * p1s / d0 + (p1s + p2s) / dp));
  return out;
}

/// Third-order ρ₂₀ on harmonics ±1, the only ones the upper population needs.
template <typename Real = double>
PerturbativeComponents<Real> order3_coherences(const PerVelocityContext<Real>& ctx,
                                               const Coupling<Real>& c) {
  using Complex = std::complex<Real>;
  const Real g = ctx.gamma;
  const Real kv = ctx.omega / Real(2);
  const Complex dp = ctx.d_plus, dm = ctx.d_minus, d0 = ctx.d_zero;
  const Real p1 = c.phi1, p2 = c.phi2, mu = c.mu, mu2 = c.mu * c.mu, m1 = mu2 - Real(1);
  const Real p1s = p1 * p1, p2s = p2 * p2;
  const Real big3 = c.delta_big * c.delta_big * c.delta_big;
  const Complex gp(g, 2 * kv), gm(g, -2 * kv);  // γ ± 2ikv
  const Complex hp(g, kv), hm(g, -kv);          // γ ± ikv

  const Complex plus =
      Real(8) * mu * p1 / big3 *
      ((m1 / (dp * dp) - Real(4) * mu2 / std::norm(dp)) * p1s * p1s + Real(2) * p1s +
       (m1 / d0 * (Real(2) / d0 + Real(3) / dp + d0 / (dp * dp)) -
        Real(4) * mu2 / std::conj(d0) * (Real(4) / d0 - hp / (dp * gm))) *
           p1s * p2s +
       (Real(4) - dp / d0 + g / gp) * p2s +
       (m1 / d0 * (Real(1) / dm + Real(2) / d0) -
        Real(4) * mu2 / std::conj(dm) * (Real(1) / dm + hp / (d0 * gm))) *
           p2s * p2s);

  const Complex minus =
      -Real(8) * mu * p2 / big3 *
      ((m1 / (dm * dm) - Real(4) * mu2 / std::norm(dm)) * p2s * p2s + Real(2) * p2s +
       (m1 / d0 * (Real(2) / d0 + Real(3) / dm + d0 / (dm * dm)) -
        Real(4) * mu2 / std::conj(d0) * (Real(4) / d0 + hm / (dm * gp))) *
           p2s * p1s +
       (Real(4) - dm / d0 + g / gm) * p1s +
       (m1 / d0 * (Real(1) / dp + Real(2) / d0) -
        Real(4) * mu2 / std::conj(dp) * (Real(1) / dp - hm / (d0 * gp))) *
           p1s * p1s);

  PerturbativeComponents<Real> out{3, {}};
  out.terms[{2, 0, 1}] = plus;
  out.terms[{2, 0, -1}] = minus;
  return out;
}

/// Spatial dc of the second-order upper population,
/// 2 Re{4μ²/(γΔ²) [φ₁⁴/D₊ + φ₂⁴/D₋ + 4φ₁²φ₂²/D₀]}.
template <typename Real = double>
Real order2_upper_dc(const PerVelocityContext<Real>& ctx, const Coupling<Real>& c) {
  const Real p1s = c.phi1 * c.phi1, p2s = c.phi2 * c.phi2;
  const auto sum = p1s * p1s / ctx.d_plus + p2s * p2s / ctx.d_minus + Real(4) * p1s * p2s / ctx.d_zero;
  return Real(8) * c.mu * c.mu / (ctx.gamma * c.delta_big * c.delta_big) * sum.real();
}

/// Closed-form spatial dc of the third-order upper population. Vanishes
/// identically at μ² = 1.
template <typename Real = double>
Real order3_upper_dc(const PerVelocityContext<Real>& ctx, const Coupling<Real>& c) {
  const Real kv = ctx.omega / Real(2);
  const Real d = ctx.delta;
  const Real p1s = c.phi1 * c.phi1, p2s = c.phi2 * c.phi2;
  const Real np = std::norm(ctx.d_plus), nm = std::norm(ctx.d_minus), n0 = std::norm(ctx.d_zero);
  const Real bracket =
      (d - Real(2) * kv) / (np * np) * (p1s + p2s) * p1s * p1s +
      ((d - kv) / np * p1s + (d + kv) / nm * p2s + d / n0 * (p1s + p2s)) * p1s * p2s / n0 +
      (d + Real(2) * kv) / (nm * nm) * (p1s + p2s) * p2s * p2s;
  const Real big = c.delta_big;
  return Real(32) * c.mu * c.mu * (c.mu * c.mu - Real(1)) / (big * big * big) * bracket;
}

/// Third-order dc upper population obtained by inserting order3_coherences
/// into the ρ₂₂ equation: γρ₂₂ = iμ(Eρ₀₂ − E*ρ₂₀) at harmonic 0, i.e.
/// (2μ/γ)[φ₁ Im ρ₂₀(+1) − φ₂ Im ρ₂₀(−1)].
template <typename Real = double>
Real order3_upper_dc_from_coherences(const PerVelocityContext<Real>& ctx,
                                     const Coupling<Real>& c) {
  const auto coh = order3_coherences(ctx, c);
  return Real(2) * c.mu / ctx.gamma *
         (c.phi1 * coh.at(2, 0, 1).imag() - c.phi2 * coh.at(2, 0, -1).imag());
}

}  // namespace tpa::perturbative
