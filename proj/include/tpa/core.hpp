#pragma once

// Physical parameters, the γ = 1 normalization, and per-velocity denominators.
//
// Frequencies are measured in units of the common relaxation rate γ once
// normalized. Atomic motion enters only through Ω = 2kv.

#include <complex>
#include <string_view>

namespace tpa {

/// Three-level ladder |1> -> |0> -> |2>.
struct AtomSpec {
  double gamma = 1.0;      ///< common relaxation rate, > 0
  double delta_big = 0.0;  ///< intermediate detuning Δ, signed, nonzero
  double mu = 1.0;         ///< ratio of upper to lower dipole projections
};

/// Two counterpropagating waves, E(θ) = φ e^{iθ} − Aφ e^{−iθ}.
struct FieldSpec {
  double phi = 0.0;      ///< forward-wave half Rabi frequency φ₁ = φ
  double a_ratio = 0.0;  ///< backward/forward ratio A, φ₂ = Aφ
  double delta = 0.0;    ///< two-photon detuning δ
};

enum class DistributionKind { Homogeneous, Lorentzian, Gaussian };

std::string_view to_string(DistributionKind kind);
DistributionKind distribution_kind_from_string(std::string_view name);

/// Distribution of Ω = 2kv. gamma_v is its half width at half maximum.
struct VelocityDistribution {
  DistributionKind kind = DistributionKind::Homogeneous;
  double gamma_v = 0.0;

  static VelocityDistribution homogeneous() { return {}; }
  static VelocityDistribution lorentzian(double gamma_v) {
    return {DistributionKind::Lorentzian, gamma_v};
  }
  static VelocityDistribution gaussian(double gamma_v) {
    return {DistributionKind::Gaussian, gamma_v};
  }

  /// Probability density in Ω. Not defined for Homogeneous (a delta at 0).
  double density(double omega) const;
};

double lorentzian_density(double omega, double gamma_v);
double gaussian_density(double omega, double gamma_v);

/// Everything in units of γ. Carries φ/γ and Δ/γ separately so the
/// non-perturbative solver can be driven from the same record.
struct NormalizedParams {
  double gamma = 1.0;  ///< the frequency unit, in raw units
  double delta_tilde = 0.0;
  double gamma_v_tilde = 0.0;
  double x = 0.0;  ///< φ²/(γΔ), signed with Δ
  double a_ratio = 0.0;
  double mu = 1.0;
  double phi_tilde = 0.0;
  double delta_big_tilde = 1.0;
  DistributionKind kind = DistributionKind::Homogeneous;

  double phi1() const { return phi_tilde; }
  double phi2() const { return a_ratio * phi_tilde; }
  VelocityDistribution distribution() const { return {kind, gamma_v_tilde}; }

  /// max(γ, |δ|, φ, γᵥ)/|Δ|: small when the expansion in 1/Δ is trustworthy.
  double epsilon_eff() const;
};

struct ParameterSet {
  AtomSpec atom;
  FieldSpec field;
  VelocityDistribution dist;
};

void validate(const AtomSpec& atom);
void validate(const FieldSpec& field);
void validate(const VelocityDistribution& dist);

/// Throws InvalidParameter if any input breaks its invariants.
NormalizedParams normalize(const AtomSpec& atom, const FieldSpec& field,
                           const VelocityDistribution& dist);
inline NormalizedParams normalize(const ParameterSet& p) {
  return normalize(p.atom, p.field, p.dist);
}
ParameterSet denormalize(const NormalizedParams& params);

/// Complex denominators of one velocity class:
/// D± = γ − i(δ ∓ Ω), D₀ = γ − iδ.
template <typename Real = double>
struct PerVelocityContext {
  using Complex = std::complex<Real>;
  Real gamma;
  Real delta;
  Real omega;
  Complex d_plus;
  Complex d_minus;
  Complex d_zero;
};

template <typename Real = double>
PerVelocityContext<Real> make_context(Real gamma, Real delta, Real omega) {
  using Complex = std::complex<Real>;
  return {gamma,
          delta,
          omega,
          Complex(gamma, -(delta - omega)),
          Complex(gamma, -(delta + omega)),
          Complex(gamma, -delta)};
}

/// Context in normalized units (γ = 1); omega is Ω/γ.
template <typename Real = double>
PerVelocityContext<Real> per_velocity_context(const NormalizedParams& params, Real omega) {
  return make_context<Real>(Real(1), static_cast<Real>(params.delta_tilde), omega);
}

}  // namespace tpa
