#pragma once

// Closed-form lineshape observables of the averaged upper population
// (Lorentzian or homogeneous ensembles), in units of γ, plus numeric
// locators for the width and peak of arbitrary curves.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "tpa/core.hpp"
#include "tpa/errors.hpp"

namespace tpa::analytics {

template <typename Real = double>
struct LineshapeParams {
  Real x = 0;  ///< φ²/(γΔ), signed
  Real a_ratio = 0;
  Real gamma_v_tilde = 0;
  Real mu = 1;
};

template <typename Real = double>
LineshapeParams<Real> lineshape_params(const NormalizedParams& p) {
  return {static_cast<Real>(p.x), static_cast<Real>(p.a_ratio), static_cast<Real>(p.gamma_v_tilde),
          static_cast<Real>(p.mu)};
}

template <typename Real>
Real prefactor2(const LineshapeParams<Real>& p) {
  return Real(8) * p.mu * p.mu * p.x * p.x;
}

/// 8μ²x²[(1+γ̃ᵥ)(1+A⁴)/((1+γ̃ᵥ)²+δ̃²) + 4A²/(1+δ̃²)]
template <typename Real>
Real n2(const LineshapeParams<Real>& p, std::type_identity_t<Real> delta_tilde) {
  const Real a2 = p.a_ratio * p.a_ratio;
  const Real s = Real(1) + p.gamma_v_tilde;
  const Real d2 = delta_tilde * delta_tilde;
  return prefactor2(p) * (s * (Real(1) + a2 * a2) / (s * s + d2) + Real(4) * a2 / (Real(1) + d2));
}

/// Homogeneous ensemble, γ̃ᵥ = 0.
template <typename Real>
Real n2_hom(const LineshapeParams<Real>& p, std::type_identity_t<Real> delta_tilde) {
  const Real a2 = p.a_ratio * p.a_ratio;
  return prefactor2(p) * (a2 * a2 + Real(4) * a2 + Real(1)) / (Real(1) + delta_tilde * delta_tilde);
}

/// Traveling wave, A = 0.
template <typename Real>
Real n2_tw(const LineshapeParams<Real>& p, std::type_identity_t<Real> delta_tilde) {
  const Real s = Real(1) + p.gamma_v_tilde;
  return prefactor2(p) * s / (s * s + delta_tilde * delta_tilde);
}

/// Standing wave, A = 1.
template <typename Real>
Real n2_sw(const LineshapeParams<Real>& p, std::type_identity_t<Real> delta_tilde) {
  const Real s = Real(1) + p.gamma_v_tilde;
  const Real d2 = delta_tilde * delta_tilde;
  return prefactor2(p) * (Real(4) / (Real(1) + d2) + Real(2) * s / (s * s + d2));
}

/// Peak value of n2, reached at δ̃ = 0.
template <typename Real>
Real n2_max(const LineshapeParams<Real>& p) {
  const Real a2 = p.a_ratio * p.a_ratio;
  return prefactor2(p) *
         ((a2 * a2 + Real(4) * a2 + Real(1)) + Real(4) * p.gamma_v_tilde * a2) /
         (Real(1) + p.gamma_v_tilde);
}

/// 16μ²(μ²−1)(1+A²)δ̃x³(B₁+B₂). B₁'s explicit 1/γ̃ᵥ is removed algebraically:
/// (1/γ̃ᵥ)[1/(1+δ̃²) − 1/((1+γ̃ᵥ)²+δ̃²)] = (2+γ̃ᵥ)/((1+δ̃²)((1+γ̃ᵥ)²+δ̃²)).
template <typename Real>
Real n3(const LineshapeParams<Real>& p, std::type_identity_t<Real> delta_tilde) {
  const Real a2 = p.a_ratio * p.a_ratio;
  const Real s = Real(1) + p.gamma_v_tilde;
  const Real d2 = delta_tilde * delta_tilde;
  const Real hom = Real(1) + d2;
  const Real inh = s * s + d2;
  const Real b1 = a2 * (Real(2) / (hom * hom) + (Real(2) + p.gamma_v_tilde) / (hom * inh));
  const Real b2 = Real(2) * (Real(1) + a2 * a2) * s / (inh * inh);
  const Real mu2 = p.mu * p.mu;
  return Real(16) * mu2 * (mu2 - Real(1)) * (Real(1) + a2) * delta_tilde * p.x * p.x * p.x *
         (b1 + b2);
}

template <typename Real = double>
struct WidthAuxiliaries {
  Real w;
  Real f;
};

template <typename Real>
WidthAuxiliaries<Real> width_auxiliaries(Real a_ratio, Real gamma_v_tilde) {
  const Real a2 = a_ratio * a_ratio;
  const Real s = Real(1) + gamma_v_tilde;
  const Real num = Real(1) + a2 * a2 - Real(4) * s * a2;
  const Real den = Real(1) + a2 * a2 + Real(4) * s * a2;
  return {s * s, num / (Real(2) * den)};
}

/// Full width of n2 along δ̃ at half its δ̃ = 0 value:
/// Γ² = 4[√(w+(w−1)²f²) + (w−1)f].
template <typename Real>
Real width_fwhm(Real a_ratio, Real gamma_v_tilde) {
  if (!(a_ratio >= Real(0)) || !(gamma_v_tilde >= Real(0)))
    throw InvalidParameter("width_fwhm needs A >= 0 and gamma_v >= 0");
  const auto [w, f] = width_auxiliaries(a_ratio, gamma_v_tilde);
  const Real b = (w - Real(1)) * f;
  const Real root = std::sqrt(w + b * b);
  // For f < 0 use the conjugate form; root + b cancels badly when w ≫ 1.
  const Real gamma2 = b >= Real(0) ? Real(4) * (root + b) : Real(4) * w / (root - b);
  return std::sqrt(gamma2);
}

/// Linear-in-x shift of the resonance peak produced by n3.
template <typename Real>
Real stark_shift(const LineshapeParams<Real>& p) {
  const Real a2 = p.a_ratio * p.a_ratio;
  const Real g = p.gamma_v_tilde;
  const Real s = Real(1) + g;
  const Real num = (Real(1) + a2 * a2) + a2 * s * (Real(2) + Real(5) * g / Real(2) + g * g);
  const Real den = (Real(1) + a2 * a2) + Real(4) * a2 * s * s * s;
  return Real(2) * (Real(1) + a2) * (p.mu * p.mu - Real(1)) * p.x * num / den;
}

/// Full width at half maximum of an even curve peaked at 0: bracket by
/// doubling, then bisect the half-maximum crossing to tol.
template <typename F>
double numeric_fwhm(F&& curve, double tol = 1e-12, double initial_step = 1.0) {
  const double peak = curve(0.0);
  if (!(peak > 0.0) || !std::isfinite(peak))
    throw LocatorFailure("curve must be positive and finite at 0");
  for (double s : {0.25 * initial_step, initial_step, 4.0 * initial_step}) {
    const double right = curve(s), left = curve(-s);
    if (right > peak * (1 + 1e-12) || std::abs(right - left) > 1e-8 * peak)
      throw LocatorFailure("curve is not even with its maximum at 0");
  }
  const double half = 0.5 * peak;
  double lo = 0.0, hi = initial_step;
  int doublings = 0;
  while (curve(hi) >= half) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) throw LocatorFailure("curve never drops below half maximum");
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (curve(mid) >= half ? lo : hi) = mid;
  }
  return lo + hi;
}

/// Location of the maximum of a curve that is unimodal near 0. A sampled
/// bracket of ±halfwidth (doubled up to 20 times until the best sample is
/// interior) is narrowed by golden-section search, then polished by
/// bisecting curve(t+h) − curve(t−h), which is insensitive to the flatness
/// of the curve at its maximum.
template <typename F>
double numeric_peak(F&& curve, double halfwidth = 4.0, double tol = 1e-10) {
  constexpr int kSamples = 64;
  double lo = 0, hi = 0;
  bool bracketed = false;
  for (int attempt = 0; attempt <= 20 && !bracketed; ++attempt, halfwidth *= 2.0) {
    std::array<double, kSamples + 1> values{};
    int best = 0;
    for (int k = 0; k <= kSamples; ++k) {
      values[k] = curve(-halfwidth + 2.0 * halfwidth * k / kSamples);
      if (values[k] > values[best]) best = k;
    }
    if (best > 0 && best < kSamples) {
      const double step = 2.0 * halfwidth / kSamples;
      lo = -halfwidth + step * (best - 1);
      hi = -halfwidth + step * (best + 1);
      bracketed = true;
    }
  }
  if (!bracketed) throw LocatorFailure("no interior maximum found");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double width = hi - lo;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = curve(c), fd = curve(d);
  for (int it = 0; it < 200 && (b - a) > 1e-4 * width; ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a), fc = curve(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a), fd = curve(d);
    }
  }

  const double h = 1e-3 * width;
  auto slope = [&](double t) { return curve(t + h) - curve(t - h); };
  double left = a, right = b;
  double s_left = slope(left);
  if (s_left < 0.0 || slope(right) > 0.0) return 0.5 * (a + b);
  for (int it = 0; it < 200 && (right - left) > tol; ++it) {
    const double mid = 0.5 * (left + right);
    const double s_mid = slope(mid);
    if (s_mid > 0.0) {
      left = mid, s_left = s_mid;
    } else {
      right = mid;
    }
  }
  return 0.5 * (left + right);
}

/// Leading-order shift −N₃′(0)/N₂″(0) from the two averaged orders, by
/// central differences with step h. Useful when no closed form exists.
template <typename F2, typename F3>
double leading_order_shift(F2&& order2, F3&& order3, double h = 1e-3) {
  const double d3 = (order3(-2 * h) - 8 * order3(-h) + 8 * order3(h) - order3(2 * h)) / (12 * h);
  const double d2 = (-order2(-2 * h) + 16 * order2(-h) - 30 * order2(0.0) + 16 * order2(h) -
                     order2(2 * h)) /
                    (12 * h * h);
  if (!(d2 < 0.0)) throw LocatorFailure("second-order curve is not peaked at 0");
  return -d3 / d2;
}

}  // namespace tpa::analytics
