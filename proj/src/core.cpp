#include "tpa/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tpa/errors.hpp"

namespace tpa {

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Homogeneous:
      return "homogeneous";
    case DistributionKind::Lorentzian:
      return "lorentzian";
    case DistributionKind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

DistributionKind distribution_kind_from_string(std::string_view name) {
  if (name == "homogeneous") return DistributionKind::Homogeneous;
  if (name == "lorentzian") return DistributionKind::Lorentzian;
  if (name == "gaussian") return DistributionKind::Gaussian;
  throw InvalidParameter("unknown distribution kind '" + std::string(name) + "'");
}

double lorentzian_density(double omega, double gamma_v) {
  return gamma_v / (std::numbers::pi * (gamma_v * gamma_v + omega * omega));
}

double gaussian_density(double omega, double gamma_v) {
  const double ln2 = std::numbers::ln2;
  const double t = omega / gamma_v;
  return std::sqrt(ln2) / (gamma_v * std::sqrt(std::numbers::pi)) * std::exp(-ln2 * t * t);
}

double VelocityDistribution::density(double omega) const {
  switch (kind) {
    case DistributionKind::Lorentzian:
      return lorentzian_density(omega, gamma_v);
    case DistributionKind::Gaussian:
      return gaussian_density(omega, gamma_v);
    case DistributionKind::Homogeneous:
      break;
  }
  throw InvalidParameter("homogeneous distribution has no density");
}

double NormalizedParams::epsilon_eff() const {
  const double largest = std::max({1.0, std::abs(delta_tilde), std::abs(phi_tilde), gamma_v_tilde});
  return largest / std::abs(delta_big_tilde);
}

void validate(const AtomSpec& atom) {
  if (!(atom.gamma > 0.0) || !std::isfinite(atom.gamma))
    throw InvalidParameter("gamma must be finite and > 0");
  if (atom.delta_big == 0.0 || !std::isfinite(atom.delta_big))
    throw InvalidParameter("delta_big must be finite and nonzero");
  if (!std::isfinite(atom.mu)) throw InvalidParameter("mu must be finite");
}

void validate(const FieldSpec& field) {
  if (!(field.phi >= 0.0) || !std::isfinite(field.phi))
    throw InvalidParameter("phi must be finite and >= 0");
  if (!(field.a_ratio >= 0.0) || !std::isfinite(field.a_ratio))
    throw InvalidParameter("a_ratio must be finite and >= 0");
  if (!std::isfinite(field.delta)) throw InvalidParameter("delta must be finite");
}

void validate(const VelocityDistribution& dist) {
  if (!(dist.gamma_v >= 0.0) || !std::isfinite(dist.gamma_v))
    throw InvalidParameter("gamma_v must be finite and >= 0");
  const bool homogeneous = dist.kind == DistributionKind::Homogeneous;
  if (homogeneous != (dist.gamma_v == 0.0))
    throw InvalidParameter("gamma_v must be 0 exactly for the homogeneous distribution");
}

NormalizedParams normalize(const AtomSpec& atom, const FieldSpec& field,
                           const VelocityDistribution& dist) {
  validate(atom);
  validate(field);
  validate(dist);
  NormalizedParams p;
  p.gamma = atom.gamma;
  p.delta_tilde = field.delta / atom.gamma;
  p.gamma_v_tilde = dist.gamma_v / atom.gamma;
  p.phi_tilde = field.phi / atom.gamma;
  p.delta_big_tilde = atom.delta_big / atom.gamma;
  p.x = p.phi_tilde * p.phi_tilde / p.delta_big_tilde;
  p.a_ratio = field.a_ratio;
  p.mu = atom.mu;
  p.kind = dist.kind;
  return p;
}

ParameterSet denormalize(const NormalizedParams& p) {
  ParameterSet out;
  out.atom = {p.gamma, p.delta_big_tilde * p.gamma, p.mu};
  out.field = {p.phi_tilde * p.gamma, p.a_ratio, p.delta_tilde * p.gamma};
  out.dist = {p.kind, p.gamma_v_tilde * p.gamma};
  return out;
}

}  // namespace tpa
