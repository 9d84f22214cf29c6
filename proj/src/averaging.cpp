#include "tpa/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tpa/perturbative.hpp"

namespace tpa::averaging {

std::string_view to_string(QuadratureMethod m) {
  return m == QuadratureMethod::GaussHermite ? "gauss_hermite" : "adaptive_finite";
}

QuadratureMethod quadrature_method_from_string(std::string_view name) {
  if (name == "gauss_hermite") return QuadratureMethod::GaussHermite;
  if (name == "adaptive_finite") return QuadratureMethod::AdaptiveFinite;
  throw InvalidParameter("unknown quadrature method '" + std::string(name) + "'");
}

void validate(const QuadratureSpec& q) {
  if (q.nodes < 8) throw InvalidParameter("quadrature needs at least 8 nodes");
  if (q.max_nodes < q.nodes) throw InvalidParameter("max_nodes must be >= nodes");
  if (!(q.tol > 0.0)) throw InvalidParameter("quadrature tolerance must be > 0");
  if (!(q.domain_halfwidth > 0.0)) throw InvalidParameter("domain_halfwidth must be > 0");
}

double lorentz_int1(double gamma, double gamma_v, double delta) {
  const double s = gamma + gamma_v;
  return s / (s * s + delta * delta);
}

double lorentz_int2(int n, double gamma, double gamma_v, double delta) {
  const double s = gamma + gamma_v;
  const double den = s * s + delta * delta;
  switch (n) {
    case 1:
      return gamma_v * delta / (gamma * den);
    case 2:
      return gamma_v * delta * (s * (3 * gamma + gamma_v) + delta * delta) /
             (2 * gamma * gamma * gamma * den * den);
    default:
      throw InvalidParameter("lorentz_int2 is defined for n = 1, 2 only");
  }
}

namespace {

void require_lorentzian_family(const NormalizedParams& p) {
  if (p.kind == DistributionKind::Gaussian)
    throw InvalidParameter("closed-form averages need a Lorentzian or homogeneous ensemble");
}

}  // namespace

double averaged_n2(const NormalizedParams& p) {
  require_lorentzian_family(p);
  const double p1s = p.phi1() * p.phi1(), p2s = p.phi2() * p.phi2();
  const double big = p.delta_big_tilde;
  return 8.0 * p.mu * p.mu / (big * big) *
         (lorentz_int1(1.0, p.gamma_v_tilde, p.delta_tilde) * (p1s * p1s + p2s * p2s) +
          4.0 * p1s * p2s * lorentz_int1(1.0, 0.0, p.delta_tilde));
}

double averaged_n3(const NormalizedParams& p) {
  require_lorentzian_family(p);
  constexpr double kLimitThreshold = 1e-6;
  const double d = p.delta_tilde, gv = p.gamma_v_tilde, a2 = p.a_ratio * p.a_ratio;
  const double d0 = 1.0 + d * d;  // |D₀|²
  const double s = 1.0 + gv;
  const double inh = s * s + d * d;
  // (1/γᵥ)[1/|D₀|² − 1/((γ+γᵥ)²+δ²)] → 2/|D₀|⁴ as γᵥ → 0.
  const double split = gv < kLimitThreshold ? 2.0 / (d0 * d0) : (1.0 / d0 - 1.0 / inh) / gv;
  const double bracket =
      a2 * (split + 2.0 / (d0 * d0)) + 2.0 * (1.0 + a2 * a2) * s / (inh * inh);
  const double x = p.x;
  return 16.0 * p.mu * p.mu * (1.0 + a2) * (p.mu * p.mu - 1.0) * d * x * x * x * bracket;
}

double averaged_order2(const NormalizedParams& p, const QuadratureSpec& quad) {
  const auto c = perturbative::coupling(p);
  return velocity_average(
      [&](double omega) {
        return perturbative::order2_upper_dc(per_velocity_context(p, omega), c);
      },
      p.distribution(), quad);
}

double averaged_order3(const NormalizedParams& p, const QuadratureSpec& quad) {
  const auto c = perturbative::coupling(p);
  return velocity_average(
      [&](double omega) {
        return perturbative::order3_upper_dc(per_velocity_context(p, omega), c);
      },
      p.distribution(), quad);
}

double averaged_order3_from_coherences(const NormalizedParams& p, const QuadratureSpec& quad) {
  const auto c = perturbative::coupling(p);
  return velocity_average(
      [&](double omega) {
        return perturbative::order3_upper_dc_from_coherences(per_velocity_context(p, omega), c);
      },
      p.distribution(), quad);
}

double lorentzian_window(const NormalizedParams& p) {
  return std::min(50.0 * p.gamma_v_tilde + 50.0 + 10.0 * std::abs(p.delta_tilde),
                  0.25 * std::abs(p.delta_big_tilde));
}

OracleAverage averaged_oracle(const NormalizedParams& p, const QuadratureSpec& quad,
                              double refine_tol, int harmonic_cap, double window) {
  OracleAverage out{0.0, 0.0, 0, 0};
  auto solve = [&](double omega) {
    oracle::SteadyStateProblem problem{p, omega, oracle::kMinHarmonics};
    auto refined = oracle::refine(problem, refine_tol, harmonic_cap);
    out.max_n_used = std::max(out.max_n_used, refined.n_used);
    ++out.evaluations;
    return oracle::dc_upper_population(refined.state.rho);
  };
  if (p.kind != DistributionKind::Lorentzian) {
    out.value = velocity_average(solve, p.distribution(), quad);
    return out;
  }

  validate(quad);
  if (quad.method != QuadratureMethod::AdaptiveFinite)
    throw InvalidParameter("Lorentzian averages need the AdaptiveFinite method");
  const double gv = p.gamma_v_tilde;
  const double edge = std::atan((window > 0.0 ? window : lorentzian_window(p)) / gv);
  const double half_pi = std::numbers::pi / 2;
  const auto c = perturbative::coupling(p);
  auto perturbative_dc = [&](double theta) {
    const auto ctx = per_velocity_context(p, gv * std::tan(theta));
    return (perturbative::order2_upper_dc(ctx, c) +
            perturbative::order3_upper_dc_from_coherences(ctx, c)) / std::numbers::pi;
  };
  const double inside = quadrature::integrate_adaptive(
      [&](double theta) { return solve(gv * std::tan(theta)) / std::numbers::pi; }, -edge, edge,
      quad.tol).value;
  out.tail = quadrature::integrate_adaptive(perturbative_dc, edge, half_pi, quad.tol).value +
             quadrature::integrate_adaptive(perturbative_dc, -half_pi, -edge, quad.tol).value;
  out.value = inside + out.tail;
  return out;
}

}  // namespace tpa::averaging
