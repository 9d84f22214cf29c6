#include <doctest.h>

#include <random>
#include <sstream>

#include "tpa/analytics.hpp"
#include "tpa/errors.hpp"
#include "tpa/oracle.hpp"

using namespace tpa;
using namespace tpa::oracle;
using C = std::complex<double>;

namespace {

NormalizedParams make(double big, double phi, double a, double delta, double mu) {
  return normalize(AtomSpec{1.0, big, mu}, FieldSpec{phi, a, delta}, VelocityDistribution{});
}

}  // namespace

TEST_CASE("system size and minimum truncation") {
  const SteadyStateProblem prob{make(100, 1, 1, 0, 1), 0.0, 5};
  const auto sys = assemble(prob);
  CHECK(sys.matrix.rows() == 99);
  CHECK(sys.matrix.cols() == 99);
  CHECK(system_size(3) == 63);
  CHECK_THROWS_AS(assemble(SteadyStateProblem{prob.params, 0.0, 2}), InvalidParameter);
}

TEST_CASE("no drive leaves the ground state") {
  for (double omega : {0.0, 2.5, -7.0}) {
    const auto s = solve_steady_state({make(100, 0, 1, 0.3, 1), omega, 3});
    const auto g = HarmonicDensityMatrix<double>::ground_state(3);
    CHECK((s.rho.coefficients() - g.coefficients()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dc_upper_population(s.rho) == 0.0);
  }
}

TEST_CASE("coupling entries of the c(2,1,n) row") {
  const double phi = 0.7, a = 0.4, mu = 1.3;
  const int n_max = 4;
  const auto sys = assemble({make(50, phi, a, 0.2, mu), 1.0, n_max});
  const int n = 0;
  const auto row = unknown_index(n_max, 2, 1, n);
  CHECK(sys.matrix(row, unknown_index(n_max, 0, 1, n - 1)) == C(0, mu * phi));
  CHECK(sys.matrix(row, unknown_index(n_max, 0, 1, n + 1)) == C(0, -mu * a * phi));
  CHECK(sys.matrix(row, unknown_index(n_max, 2, 0, n - 1)) == C(0, -phi));
  CHECK(sys.matrix(row, unknown_index(n_max, 2, 0, n + 1)) == C(0, a * phi));
  // Diagonal: −γ − inΩ/2 − i(H₂₂ − H₁₁) with H₂₂ − H₁₁ = −δ.
  const auto row2 = unknown_index(n_max, 2, 1, 2);
  CHECK(sys.matrix(row2, row2).real() == -1.0);
  CHECK(sys.matrix(row2, row2).imag() == doctest::Approx(-1.0 + 0.2));
  CHECK(sys.rhs.cwiseAbs().sum() == 1.0);
  CHECK(sys.rhs(unknown_index(n_max, 1, 1, 0)) == C(-1.0));
}

TEST_CASE("weak-drive dc population matches the second-order line strength") {
  const auto p = make(1000, 1, 1, 0, 1);
  const auto s = solve_steady_state({p, 0.0, 5});
  const double exact = analytics::n2(analytics::lineshape_params<double>(p), 0.0);
  CHECK(exact == doctest::Approx(4.8e-5).epsilon(1e-12));
  CHECK(std::abs(dc_upper_population(s.rho) - exact) / exact < 1e-3);
}

TEST_CASE("structural invariants over random draws") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double big = (u(rng) < 0.5 ? -1 : 1) * std::pow(10.0, 1 + 3 * u(rng));
    const auto p = make(big, 0.1 + 2.9 * u(rng), 1.5 * u(rng), -3 + 6 * u(rng), 0.5 + 1.5 * u(rng));
    const double omega = -6 + 12 * u(rng);
    const auto s = solve_steady_state({p, omega, 5});
    CHECK(s.residual < 1e-10);
    CHECK(hermiticity_error(s.rho) < 1e-10);
    CHECK(trace_error(s.rho) < 1e-10);
    CHECK(parity_error(s.rho) < 1e-10);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(s.rho(i, i, 0).imag()) < 1e-10);
      CHECK(s.rho(i, i, 0).real() > -1e-10);
      CHECK(s.rho(i, i, 0).real() < 1 + 1e-10);
    }
    CHECK_FALSE(s.ill_conditioned());
  }
}

TEST_CASE("beam exchange with reversed velocity is a symmetry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double phi = 0.2 + 2 * u(rng), a = 0.3 + 1.5 * u(rng), big = 30 + 500 * u(rng);
    const double delta = -2 + 4 * u(rng), mu = 0.6 + u(rng), omega = -4 + 8 * u(rng);
    const auto one = solve_steady_state({make(big, phi, a, delta, mu), omega, 7});
    const auto two = solve_steady_state({make(big, a * phi, 1 / a, delta, mu), -omega, 7});
    CHECK(std::abs(dc_upper_population(one.rho) - dc_upper_population(two.rho)) < 1e-10);
  }
}

TEST_CASE("refine walks odd truncations and reports the one used") {
  const auto weak = refine(SteadyStateProblem{make(100, 0.01, 1, 0.5, 1.2), 1.0}, 1e-16);
  CHECK(weak.n_used >= 5);
  CHECK(weak.n_used <= 7);
  CHECK(weak.n_used % 2 == 1);

  // A traveling wave populates only a few harmonics.
  const auto tw = refine(SteadyStateProblem{make(100, 0.5, 0, 0.5, 1.2), 2.0}, 1e-15);
  const auto tw_big = solve_steady_state({make(100, 0.5, 0, 0.5, 1.2), 2.0, 15});
  CHECK(std::abs(tw.state.rho(2, 2, 0) - tw_big.rho(2, 2, 0)) < 1e-15);

  CHECK_THROWS_AS(refine(SteadyStateProblem{make(100, 1, 1, 0, 1), 0.0}, 0.0), TruncationError);
  CHECK_THROWS_AS(refine(SteadyStateProblem{make(100, 1, 1, 0, 1), 0.0}, -1.0), InvalidParameter);
  try {
    refine(SteadyStateProblem{make(100, 1, 1, 0, 1), 0.0}, 0.0, 9);
  } catch (const TruncationError& e) {
    CHECK(e.n_max_reached() == 9);
  }
}

TEST_CASE("relative error falls as 1/Delta^2 at delta=0, A=1, mu=1") {
  std::vector<double> err;
  for (double big : {1e2, 1e3, 1e4}) {
    const auto p = make(big, 1, 1, 0, 1);
    const double n2 = analytics::n2(analytics::lineshape_params<double>(p), 0.0);
    const auto s = refine(SteadyStateProblem{p, 0.0}, 1e-18);
    err.push_back(std::abs(dc_upper_population(s.state.rho) - n2) / n2);
  }
  CHECK(err[0] / err[1] == doctest::Approx(100).epsilon(0.05));
  CHECK(err[1] / err[2] == doctest::Approx(100).epsilon(0.05));
}

TEST_CASE("imaginary dc population is an internal inconsistency") {
  auto c = HarmonicDensityMatrix<double>::ground_state(3).coefficients();
  c(unknown_index(3, 2, 2, 0)) = C(0.1, 1e-6);
  CHECK_THROWS_AS(dc_upper_population(HarmonicDensityMatrix<double>(3, c)), ConsistencyFailure);
  CHECK_THROWS_AS(HarmonicDensityMatrix<double>(5, c), InvalidParameter);
}

TEST_CASE("triplet dump lists nonzero entries") {
  const auto sys = assemble({make(100, 1, 0.5, 0, 1), 0.5, 3});
  std::ostringstream os;
  write_triplets(os, sys);
  std::istringstream in(os.str());
  long r, c;
  double re, im;
  int lines = 0;
  while (in >> r >> c >> re >> im) {
    CHECK(sys.matrix(r, c) == C(re, im));
    ++lines;
  }
  CHECK(lines == (sys.matrix.array() != C(0)).count());
}

TEST_CASE("long double instantiation agrees with double") {
  const SteadyStateProblem prob{make(300, 0.8, 0.6, 0.4, 1.4), 1.5, 5};
  const auto d = solve_steady_state<double>(prob);
  const auto l = solve_steady_state<long double>(prob);
  CHECK(std::abs(static_cast<double>(l.rho(2, 2, 0).real()) - d.rho(2, 2, 0).real()) < 1e-15);
}
