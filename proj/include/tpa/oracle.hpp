#pragma once

// Non-perturbative steady state of the population-matrix equations at a
// fixed Doppler variable Ω, by expansion in spatial harmonics
//
//   ρᵢⱼ(z) = Σₙ c(i,j,n) e^{inkz},  |n| ≤ n_max,
//
// followed by a dense direct solve. Levels are indexed 0 (intermediate),
// 1 (ground), 2 (upper). All nine components are unknowns; hermiticity is
// checked afterwards, never imposed.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <string>

#include "tpa/core.hpp"
#include "tpa/errors.hpp"

namespace tpa::oracle {

inline constexpr int kMinHarmonics = 3;
inline constexpr int kDefaultHarmonicCap = 41;
inline constexpr double kResidualTolerance = 1e-10;
inline constexpr double kConditionWarning = 1e12;

template <typename Real = double>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real = double>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Position of c(i,j,n) in the flattened unknown vector.
constexpr Eigen::Index unknown_index(int n_max, int i, int j, int n) {
  return static_cast<Eigen::Index>(n + n_max) * 9 + 3 * i + j;
}

constexpr Eigen::Index system_size(int n_max) { return 9 * (2 * static_cast<Eigen::Index>(n_max) + 1); }

template <typename Real = double>
class HarmonicDensityMatrix {
 public:
  using Complex = std::complex<Real>;

  HarmonicDensityMatrix(int n_max, ComplexVector<Real> coeffs)
      : n_max_(n_max), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != system_size(n_max_))
      throw InvalidParameter("coefficient vector does not match n_max");
  }

  /// ρ₁₁ = 1, everything else zero.
  static HarmonicDensityMatrix ground_state(int n_max) {
    ComplexVector<Real> c = ComplexVector<Real>::Zero(system_size(n_max));
    c(unknown_index(n_max, 1, 1, 0)) = Complex(1);
    return HarmonicDensityMatrix(n_max, std::move(c));
  }

  int n_max() const { return n_max_; }
  const ComplexVector<Real>& coefficients() const { return coeffs_; }

  /// c(i,j,n); zero outside the truncation window.
  Complex operator()(int i, int j, int n) const {
    if (n < -n_max_ || n > n_max_) return Complex(0);
    return coeffs_(unknown_index(n_max_, i, j, n));
  }

 private:
  int n_max_;
  ComplexVector<Real> coeffs_;
};

struct SteadyStateProblem {
  NormalizedParams params;
  double omega = 0.0;  ///< Ω/γ
  int n_max = 5;
};

template <typename Real = double>
struct LinearSystem {
  int n_max;
  ComplexMatrix<Real> matrix;
  ComplexVector<Real> rhs;
};

namespace detail {

template <typename Real>
using Matrix3c = Eigen::Matrix<std::complex<Real>, 3, 3>;

/// Rotating-frame Hamiltonian split as H₀ + H₊ e^{ikz} + H₋ e^{−ikz}.
template <typename Real>
struct HamiltonianHarmonics {
  Matrix3c<Real> h0;
  Matrix3c<Real> h_plus;
  Matrix3c<Real> h_minus;
};

template <typename Real>
HamiltonianHarmonics<Real> hamiltonian_harmonics(const NormalizedParams& p) {
  const Real phi1 = static_cast<Real>(p.phi1());
  const Real phi2 = static_cast<Real>(p.phi2());
  const Real mu = static_cast<Real>(p.mu);
  const Real delta = static_cast<Real>(p.delta_tilde);
  const Real big = static_cast<Real>(p.delta_big_tilde);
  // δ₁ = (δ+Δ)/2 on |1>, −δ₂ = (Δ−δ)/2 on |2>.
  HamiltonianHarmonics<Real> h{Matrix3c<Real>::Zero(), Matrix3c<Real>::Zero(),
                               Matrix3c<Real>::Zero()};
  h.h0(1, 1) = (delta + big) / Real(2);
  h.h0(2, 2) = (big - delta) / Real(2);
  // −μE|2><0| − E|0><1| + h.c. with E = φ₁e^{ikz} − φ₂e^{−ikz}.
  h.h_plus(2, 0) = -mu * phi1;
  h.h_plus(0, 1) = -phi1;
  h.h_plus(0, 2) = mu * phi2;
  h.h_plus(1, 0) = phi2;
  h.h_minus(2, 0) = mu * phi2;
  h.h_minus(0, 1) = phi2;
  h.h_minus(0, 2) = -mu * phi1;
  h.h_minus(1, 0) = -phi1;
  return h;
}

}  // namespace detail

/// Harmonic-balance form of the steady-state equations
///   0 = −(γ + i n Ω/2) c(i,j,n) − i[H, ρ]ᵢⱼ(n) + γ δᵢ₁δⱼ₁δₙ₀,
/// written as M c = b.
template <typename Real = double>
LinearSystem<Real> assemble(const SteadyStateProblem& problem) {
  using Complex = std::complex<Real>;
  const int n_max = problem.n_max;
  if (n_max < kMinHarmonics)
    throw InvalidParameter("n_max must be >= " + std::to_string(kMinHarmonics));

  const auto h = detail::hamiltonian_harmonics<Real>(problem.params);
  const std::array<std::pair<int, const detail::Matrix3c<Real>*>, 3> parts = {
      std::pair{0, &h.h0}, std::pair{1, &h.h_plus}, std::pair{-1, &h.h_minus}};

  const Eigen::Index dim = system_size(n_max);
  LinearSystem<Real> sys{n_max, ComplexMatrix<Real>::Zero(dim, dim), ComplexVector<Real>::Zero(dim)};
  const Complex I(0, 1);
  const Real omega = static_cast<Real>(problem.omega);

  for (int n = -n_max; n <= n_max; ++n) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const auto row = unknown_index(n_max, i, j, n);
        sys.matrix(row, row) += -Complex(Real(1), Real(n) * omega / Real(2));
        for (const auto& [shift, hm] : parts) {
          const int src = n - shift;
          if (src < -n_max || src > n_max) continue;
          for (int k = 0; k < 3; ++k) {
            // −i (H_ik ρ_kj − ρ_ik H_kj)
            const Complex left = (*hm)(i, k);
            const Complex right = (*hm)(k, j);
            if (left != Complex(0)) sys.matrix(row, unknown_index(n_max, k, j, src)) += -I * left;
            if (right != Complex(0)) sys.matrix(row, unknown_index(n_max, i, k, src)) += I * right;
          }
        }
      }
    }
  }
  sys.rhs(unknown_index(n_max, 1, 1, 0)) = Complex(-1);
  return sys;
}

template <typename Real = double>
Real residual(const LinearSystem<Real>& sys, const HarmonicDensityMatrix<Real>& rho) {
  return (sys.matrix * rho.coefficients() - sys.rhs).cwiseAbs().maxCoeff();
}

template <typename Real = double>
struct SteadyState {
  HarmonicDensityMatrix<Real> rho;
  Real residual;
  Real condition_estimate;  ///< 1/rcond of the LU factorization

  bool ill_conditioned() const { return condition_estimate > Real(kConditionWarning); }
};

/// Direct LU solve. Throws SolverFailure on a singular system or when the
/// residual exceeds kResidualTolerance.
template <typename Real = double>
SteadyState<Real> solve_steady_state(const SteadyStateProblem& problem) {
  auto sys = assemble<Real>(problem);
  Eigen::PartialPivLU<ComplexMatrix<Real>> lu(sys.matrix);
  const Real rcond = lu.rcond();
  const Real cond = rcond > Real(0) ? Real(1) / rcond : std::numeric_limits<Real>::infinity();
  if (!(rcond > std::numeric_limits<Real>::epsilon()))
    throw SolverFailure("steady-state system is singular to working precision",
                        static_cast<double>(cond));
  HarmonicDensityMatrix<Real> rho(problem.n_max, lu.solve(sys.rhs));
  const Real res = residual(sys, rho);
  if (!(res < Real(kResidualTolerance)))
    throw SolverFailure("steady-state residual " + std::to_string(static_cast<double>(res)) +
                            " above tolerance",
                        static_cast<double>(cond));
  return {std::move(rho), res, cond};
}

template <typename Real = double>
struct RefinedSteadyState {
  SteadyState<Real> state;
  int n_used;
};

/// Walks n_max = 3, 5, 7, … until c(2,2,0) changes by less than tol between
/// consecutive truncations. Returns the finer of the last two solves.
template <typename Real = double>
RefinedSteadyState<Real> refine(SteadyStateProblem problem, double tol,
                                int cap = kDefaultHarmonicCap) {
  if (!(tol >= 0.0)) throw InvalidParameter("refine tolerance must be >= 0");
  problem.n_max = kMinHarmonics;
  auto previous = solve_steady_state<Real>(problem);
  double change = std::numeric_limits<double>::infinity();
  while (problem.n_max + 2 <= cap) {
    problem.n_max += 2;
    auto current = solve_steady_state<Real>(problem);
    change = static_cast<double>(std::abs(current.rho(2, 2, 0) - previous.rho(2, 2, 0)));
    if (change < tol) return {std::move(current), problem.n_max};
    previous = std::move(current);
  }
  throw TruncationError("harmonic truncation did not converge below tolerance", problem.n_max,
                        change);
}

/// Spatial dc part of the upper-level population, Re c(2,2,0).
template <typename Real = double>
Real dc_upper_population(const HarmonicDensityMatrix<Real>& rho, Real imag_tol = Real(1e-10)) {
  const auto c = rho(2, 2, 0);
  if (std::abs(c.imag()) > imag_tol)
    throw ConsistencyFailure("dc upper population has imaginary part " +
                             std::to_string(static_cast<double>(c.imag())));
  return c.real();
}

/// max |c(i,j,n) − conj c(j,i,−n)|.
template <typename Real = double>
Real hermiticity_error(const HarmonicDensityMatrix<Real>& rho) {
  Real worst = 0;
  const int n_max = rho.n_max();
  for (int n = -n_max; n <= n_max; ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(rho(i, j, n) - std::conj(rho(j, i, -n))));
  return worst;
}

/// Largest deviation of Σᵢ c(i,i,n) from δₙ₀.
template <typename Real = double>
Real trace_error(const HarmonicDensityMatrix<Real>& rho) {
  Real worst = 0;
  const int n_max = rho.n_max();
  for (int n = -n_max; n <= n_max; ++n) {
    std::complex<Real> tr = rho(0, 0, n) + rho(1, 1, n) + rho(2, 2, n);
    if (n == 0) tr -= Real(1);
    worst = std::max(worst, std::abs(tr));
  }
  return worst;
}

/// Largest coefficient found on a harmonic the symmetry forbids: populations,
/// ρ₂₁ and ρ₁₂ live on even n; ρ₀₁, ρ₂₀ and their conjugates on odd n.
template <typename Real = double>
Real parity_error(const HarmonicDensityMatrix<Real>& rho) {
  Real worst = 0;
  const int n_max = rho.n_max();
  for (int n = -n_max; n <= n_max; ++n) {
    const bool even = (n % 2) == 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        // Pairs coupling level 0 to 1 or 2 carry one photon: odd harmonics.
        const bool one_photon = (i == 0) != (j == 0);
        if (one_photon == even) worst = std::max(worst, std::abs(rho(i, j, n)));
      }
    }
  }
  return worst;
}

/// Debug dump of the nonzero entries as "row col re im" lines.
template <typename Real = double>
void write_triplets(std::ostream& os, const LinearSystem<Real>& sys) {
  os.precision(17);
  for (Eigen::Index c = 0; c < sys.matrix.cols(); ++c)
    for (Eigen::Index r = 0; r < sys.matrix.rows(); ++r) {
      const auto v = sys.matrix(r, c);
      if (v != std::complex<Real>(0))
        os << r << ' ' << c << ' ' << static_cast<double>(v.real()) << ' '
           << static_cast<double>(v.imag()) << '\n';
    }
}

}  // namespace tpa::oracle
