#pragma once

// Spatial dc extraction and averaging over the Doppler variable Ω = 2kv.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "tpa/core.hpp"
#include "tpa/errors.hpp"
#include "tpa/oracle.hpp"
#include "tpa/quadrature.hpp"

namespace tpa::averaging {

enum class QuadratureMethod { GaussHermite, AdaptiveFinite };

std::string_view to_string(QuadratureMethod m);
QuadratureMethod quadrature_method_from_string(std::string_view name);

/// GaussHermite: node count starts at `nodes` and doubles until two
/// successive sums agree to tol (relative to Σw|f|), up to max_nodes.
/// AdaptiveFinite: Gauss-Kronrod with relative tolerance tol. Gaussian
/// densities are integrated over |Ω| ≤ domain_halfwidth·γᵥ; Lorentzian
/// densities over the whole line through Ω = γᵥ tan θ.
struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::GaussHermite;
  int nodes = 32;
  int max_nodes = 1024;
  double domain_halfwidth = 8.0;
  double tol = 1e-10;

  static QuadratureSpec adaptive(double tol = 1e-10) {
    return {QuadratureMethod::AdaptiveFinite, 32, 1024, 8.0, tol};
  }
};

void validate(const QuadratureSpec& q);

/// Lorentzian convolution (1/π)∫dΩ γᵥ/(γᵥ²+Ω²) · γ/(γ²+(δ±Ω)²).
double lorentz_int1(double gamma, double gamma_v, double delta);

/// (1/π)∫dΩ γᵥ/(γᵥ²+Ω²) · Ω/[γ²+(δ−Ω)²]ⁿ for n ∈ {1, 2}. The (δ+Ω) branch
/// is the negative of this.
double lorentz_int2(int n, double gamma, double gamma_v, double delta);

template <typename Real>
std::complex<Real> spatial_dc(const oracle::HarmonicDensityMatrix<Real>& rho, int i, int j) {
  return rho(i, j, 0);
}

/// ∫ f(Ω) ρ(Ω) dΩ for the given distribution; f(0) for Homogeneous.
template <typename F>
double velocity_average(F&& f, const VelocityDistribution& dist, const QuadratureSpec& quad) {
  validate(dist);
  validate(quad);
  switch (dist.kind) {
    case DistributionKind::Homogeneous:
      return f(0.0);

    case DistributionKind::Lorentzian: {
      if (quad.method != QuadratureMethod::AdaptiveFinite)
        throw InvalidParameter("Lorentzian averages need the AdaptiveFinite method");
      const double gv = dist.gamma_v;
      const double half_pi = std::numbers::pi / 2;
      auto mapped = [&](double theta) { return f(gv * std::tan(theta)) / std::numbers::pi; };
      return quadrature::integrate_adaptive(mapped, -half_pi, half_pi, quad.tol).value;
    }

    case DistributionKind::Gaussian: {
      const double gv = dist.gamma_v;
      if (quad.method == QuadratureMethod::AdaptiveFinite) {
        const double edge = quad.domain_halfwidth * gv;
        auto weighted = [&](double omega) { return f(omega) * gaussian_density(omega, gv); };
        return quadrature::integrate_adaptive(weighted, -edge, edge, quad.tol).value;
      }
      // t = √ln2·Ω/γᵥ turns the density into e^{−t²}/√π.
      const double scale = gv / std::sqrt(std::numbers::ln2);
      auto sum_with = [&](int n, double& l1) {
        const auto rule = quadrature::gauss_hermite_rule(n);
        double s = 0.0;
        l1 = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double term = rule.weights[k] * f(scale * rule.nodes[k]);
          s += term;
          l1 += std::abs(term);
        }
        return s / std::sqrt(std::numbers::pi);
      };
      double l1 = 0.0;
      double previous = sum_with(quad.nodes, l1);
      double change = 0.0;
      for (int n = 2 * quad.nodes; n <= quad.max_nodes; n *= 2) {
        const double current = sum_with(n, l1);
        change = std::abs(current - previous);
        if (change <= quad.tol * l1 / std::sqrt(std::numbers::pi)) return current;
        previous = current;
      }
      throw QuadratureFailure("Gauss-Hermite average did not converge by " +
                                  std::to_string(quad.max_nodes) + " nodes",
                              change);
    }
  }
  throw InvalidParameter("unknown distribution kind");
}

/// Second-order averaged upper population for a Lorentzian (or homogeneous)
/// ensemble, assembled from lorentz_int1.
double averaged_n2(const NormalizedParams& params);

/// Third-order averaged upper population for a Lorentzian (or homogeneous)
/// ensemble.
double averaged_n3(const NormalizedParams& params);

/// Quadrature averages of the per-velocity closed forms for any distribution.
double averaged_order2(const NormalizedParams& params, const QuadratureSpec& quad);
double averaged_order3(const NormalizedParams& params, const QuadratureSpec& quad);
/// Same as averaged_order3 but with the third-order dc taken from the
/// third-order coherences rather than from the reduced closed form.
double averaged_order3_from_coherences(const NormalizedParams& params, const QuadratureSpec& quad);

/// Half width of the Lorentzian window over which oracle averages solve the
/// full problem: min(50γᵥ + 50γ + 10|δ|, |Δ|/4). The cap keeps the window
/// clear of the one-photon Doppler resonance at |Ω| ≈ |Δ|.
double lorentzian_window(const NormalizedParams& params);

struct OracleAverage {
  double value;
  double tail;  ///< perturbative contribution from outside the window (Lorentzian only)
  int max_n_used;
  int evaluations;  ///< quadrature nodes visited
};

/// Velocity average of the non-perturbative dc upper population, with the
/// harmonic truncation refined independently at every quadrature node.
/// Lorentzian ensembles solve inside lorentzian_window and add the tail
/// from the second- plus third-order per-velocity dc.
/// window > 0 overrides the default half width.
OracleAverage averaged_oracle(const NormalizedParams& params, const QuadratureSpec& quad,
                              double refine_tol, int harmonic_cap = oracle::kDefaultHarmonicCap,
                              double window = 0.0);

}  // namespace tpa::averaging
