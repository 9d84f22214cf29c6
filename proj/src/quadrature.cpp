#include "tpa/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace tpa::quadrature {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix of
// the Hermite recurrence, weights √π times the squared first components.
GaussHermiteRule build_rule(int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success)
    throw QuadratureFailure("Gauss-Hermite eigenproblem failed", 0.0);

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = eig.eigenvalues()(k);
    const double v = eig.eigenvectors()(0, k);
    rule.weights[k] = sqrt_pi * v * v;
  }
  // Exact symmetry about 0.
  for (int k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[n - 1 - k] + rule.weights[k]);
    rule.nodes[k] = -x, rule.nodes[n - 1 - k] = x;
    rule.weights[k] = w, rule.weights[n - 1 - k] = w;
  }
  if (n % 2) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

GaussHermiteRule gauss_hermite_rule(int n) {
  if (n < 1) throw InvalidParameter("Gauss-Hermite rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

}  // namespace tpa::quadrature
