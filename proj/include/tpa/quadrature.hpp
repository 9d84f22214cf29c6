#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "tpa/errors.hpp"

namespace tpa::quadrature {

/// Nodes and weights for ∫ f(t) e^{−t²} dt ≈ Σ wᵢ f(tᵢ). Nodes ascending.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_rule(int n);

struct AdaptiveResult {
  double value;
  double error;
  double l1;  ///< ∫|f|, the scale the tolerance is relative to
};

namespace detail {
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}
}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]: the panel with the
/// largest error estimate is bisected until the summed estimate drops below
/// tol·∫|f|. Throws QuadratureFailure if max_panels is reached first.
template <typename F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double tol, int max_panels = 4000) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Panel {
    double a, b, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto panel = [&](double lo, double hi) {
    Panel p{lo, hi, 0.0, 0.0, 0.0};
    p.value = Rule::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
    return p;
  };
  std::priority_queue<Panel> queue;
  queue.push(panel(a, b));
  double value = queue.top().value, error = queue.top().error, l1 = queue.top().l1;
  const double floor = 64 * std::numeric_limits<double>::epsilon();
  while (error > std::max(tol, floor) * l1 && static_cast<int>(queue.size()) < max_panels) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // panel below resolution
    const Panel left = panel(worst.a, mid), right = panel(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  value = error = l1 = 0.0;
  for (; !queue.empty(); queue.pop()) {
    value += queue.top().value;
    error += queue.top().error;
    l1 += queue.top().l1;
  }
  if (!std::isfinite(value) || error > std::max(tol, floor) * l1)
    throw QuadratureFailure("adaptive quadrature did not reach tolerance (error " +
                                detail::sci(error) + ", requested " +
                                detail::sci(std::max(tol, floor) * l1) + ")",
                            error);
  return {value, error, l1};
}

}  // namespace tpa::quadrature
