// Acceptance suite: one PASS/FAIL line per criterion, details indented
// below it. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tpa/analytics.hpp"
#include "tpa/averaging.hpp"
#include "tpa/oracle.hpp"
#include "tpa/scan.hpp"

using namespace tpa;
using analytics::LineshapeParams;
using LP = LineshapeParams<double>;

namespace {

std::vector<std::string> details;

template <typename... Args>
void note(const char* fmt, Args... args) {
  char buf[512];
  if constexpr (sizeof...(Args) == 0)
    std::snprintf(buf, sizeof buf, "%s", fmt);
  else
    std::snprintf(buf, sizeof buf, fmt, args...);
  details.emplace_back(buf);
}

struct Outcome {
  int passed = 0, failed = 0;
};

void criterion(Outcome& out, int id, const char* title, const std::function<bool()>& body) {
  details.clear();
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note("exception: %s", e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  criterion %2d: %s  (%.2fs)\n", ok ? "PASS" : "FAIL", id, title, secs);
  for (const auto& d : details) std::printf("        %s\n", d.c_str());
  std::fflush(stdout);
  (ok ? out.passed : out.failed)++;
}

NormalizedParams make(double big, double phi, double a, double delta, double mu,
                      VelocityDistribution dist = {}) {
  return normalize(AtomSpec{1.0, big, mu}, FieldSpec{phi, a, delta}, dist);
}

const std::vector<double> kLatticeA = {0.0, 0.25, 0.5, 1.0};
const std::vector<double> kLatticeGv = {0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0};

double fitted_exponent(const std::vector<double>& big, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(big.size());
  for (std::size_t k = 0; k < big.size(); ++k) {
    const double x = std::log(big[k]), y = std::log(err[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Oracle-vs-perturbation ladder for one parameter point. `third` gives the
// averaged third-order term to add to N₂.
bool ladder(double gv, double a, double delta, double mu, const char* label,
            const std::function<double(const NormalizedParams&)>& third) {
  const std::vector<double> bigs = {1e2, 1e3, 1e4};
  const auto dist = gv == 0.0 ? VelocityDistribution{} : VelocityDistribution::lorentzian(gv);
  // One window for the whole ladder: the default one of its smallest Δ.
  const double window = averaging::lorentzian_window(make(bigs.front(), 1.0, a, delta, mu, dist));
  const auto quad = averaging::QuadratureSpec::adaptive(1e-9);
  std::vector<double> err;
  for (double big : bigs) {
    const auto p = make(big, 1.0, a, delta, mu, dist);
    const double pert = averaging::averaged_n2(p) + third(p);
    const auto r = averaging::averaged_oracle(p, quad, 1e-15, oracle::kDefaultHarmonicCap, window);
    err.push_back(std::abs(r.value - pert) / std::abs(pert));
  }
  const double e = fitted_exponent(bigs, err);
  const bool ok = e >= 1.7 && e <= 2.3;
  note("%s gv=%g A=%g delta=%g mu=%.4f: rel.err %.3e %.3e %.3e  exponent %.3f %s", label, gv, a,
       delta, mu, err[0], err[1], err[2], e, ok ? "" : "<-- outside [1.7, 2.3]");
  return ok;
}

}  // namespace

int main() {
  Outcome out;

  criterion(out, 1, "homogeneous width is 2", [] {
    double worst = 0;
    for (double a : {0.0, 0.5, 1.0}) worst = std::max(worst, std::abs(analytics::width_fwhm(a, 0.0) - 2.0));
    note("max |Gamma - 2| = %.3e (tolerance 1e-12)", worst);
    return worst <= 1e-12;
  });

  criterion(out, 2, "traveling-wave width 2(1+gamma_v)", [] {
    double worst = 0;
    for (double gv : {0.5, 1.0, 3.0, 10.0})
      worst = std::max(worst, std::abs(analytics::width_fwhm(0.0, gv) - 2 * (1 + gv)));
    note("max deviation %.3e (tolerance 1e-10)", worst);
    return worst <= 1e-10;
  });

  criterion(out, 3, "sub-Doppler standing-wave width at gamma_v=100", [] {
    const double w = analytics::width_fwhm(1.0, 100.0);
    note("width_fwhm(1, 100) = %.10f, asymptote 2(1+1/200) = %.10f", w, 2 * (1 + 1 / 200.0));
    return w >= 2.009 && w <= 2.011;
  });

  criterion(out, 4, "standing/traveling strength ratio 6", [] {
    const double r = analytics::n2(LP{0.01, 1, 0, 1}, 0.0) / analytics::n2(LP{0.01, 0, 0, 1}, 0.0);
    note("ratio = %.17g", r);
    return std::abs(r - 6.0) <= 1e-12;
  });

  criterion(out, 5, "inhomogeneous-limit strengths", [] {
    bool ok = true;
    const double pref = analytics::prefactor2(LP{0.01, 0, 0, 1});
    for (double gv : {1e2, 1e3, 1e4}) {
      const double scaled = gv * analytics::n2_tw(LP{0.01, 0, gv, 1}, 0.0) / pref;
      note("gamma_v * n2_tw / 8mu^2x^2 at gamma_v=%g: %.8f", gv, scaled);
      ok = ok && std::abs(scaled - 1.0) <= 1.01 / gv;
    }
    const double r = analytics::n2_sw(LP{0.01, 1, 1e4, 1}, 0.0) / analytics::n2_hom(LP{0.01, 1, 0, 1}, 0.0);
    note("n2_sw(gamma_v=1e4)/n2_hom(A=1) = %.8f (target 2/3 within 1e-3)", r);
    return ok && std::abs(r - 2.0 / 3.0) <= 1e-3;
  });

  criterion(out, 6, "Stark shift properties", [] {
    bool zero = true, flat = true;
    for (double a : kLatticeA)
      for (double gv : kLatticeGv) zero = zero && analytics::stark_shift(LP{0.01, a, gv, 1.0}) == 0.0;
    const double mu = 1.7, x = 0.004;
    for (double gv : kLatticeGv)
      flat = flat && analytics::stark_shift(LP{x, 0, gv, mu}) == 2 * (mu * mu - 1) * x;
    const double ratio = analytics::stark_shift(LP{x, 1, 1e4, mu}) / analytics::stark_shift(LP{x, 0, 1e4, mu});
    note("zero at mu=1: %s; A=0 equals 2(mu^2-1)x for all gamma_v: %s; SW/TW at 1e4 = %.6f",
         zero ? "yes" : "no", flat ? "yes" : "no", ratio);
    return zero && flat && std::abs(ratio - 0.5) <= 1e-3;
  });

  criterion(out, 7, "closed-form vs numeric locators", [] {
    const double mu = std::numbers::sqrt2;
    double worst_w = 0, worst_s = 0, worst_ratio = 0;
    bool scaling = true;
    for (double a : kLatticeA)
      for (double gv : kLatticeGv) {
        auto width_curve = [&](double d) { return analytics::n2(LP{1e-3, a, gv, mu}, d); };
        worst_w = std::max(worst_w, std::abs(analytics::numeric_fwhm(width_curve, 1e-12, 1 + gv) -
                                             analytics::width_fwhm(a, gv)));
        auto err = [&](double x) {
          const LP p{x, a, gv, mu};
          const double peak = analytics::numeric_peak(
              [&](double d) { return analytics::n2(p, d) + analytics::n3(p, d); }, 4 * (1 + gv));
          return std::abs(peak / analytics::stark_shift(p) - 1.0);
        };
        const double e2 = err(1e-2), e3 = err(1e-3), e4 = err(1e-4);
        worst_s = std::max(worst_s, e3);
        // Tolerance scales with x: 5% at 1e-3, so 50% at 1e-2 and 0.5% at 1e-4.
        if (e2 > 0.5 || e4 > 0.005) {
          note("scaled tolerance missed at A=%g gamma_v=%g: rel.err %.3e %.3e %.3e at x=1e-2,1e-3,1e-4", a, gv, e2, e3, e4);
          scaling = false;
        }
        worst_ratio = std::max(worst_ratio, e2 / 0.5);
        worst_ratio = std::max(worst_ratio, e4 / 0.005);
        if (a == 1.0 && gv == 0.0) note("A=1 gamma_v=0: rel.err %.3e %.3e %.3e at x=1e-2,1e-3,1e-4", e2, e3, e4);
      }
    note("max |width_fwhm - numeric_fwhm| = %.3e (tolerance 1e-6)", worst_w);
    note("max relative |stark - argmax(n2+n3)| at x=1e-3 = %.3e (tolerance 5%%)", worst_s);
    note("worst error / scaled tolerance at x=1e-2 and 1e-4: %.3e", worst_ratio);
    return worst_w <= 1e-6 && worst_s <= 0.05 && scaling;
  });

  criterion(out, 8, "Lorentzian integrals vs quadrature", [] {
    const auto quad = averaging::QuadratureSpec::adaptive(1e-11);
    double worst = 0;
    for (double gv : {0.1, 1.0, 10.0})
      for (double d : {0.0, 1.0, 5.0}) {
        const auto dist = VelocityDistribution::lorentzian(gv);
        auto avg = [&](auto f) { return averaging::velocity_average(f, dist, quad); };
        const double q1 = avg([&](double w) { return 1.0 / (1.0 + (d - w) * (d - w)); });
        const double q21 = avg([&](double w) { return w / (1.0 + (d - w) * (d - w)); });
        const double q22 = avg([&](double w) { const double t = 1.0 + (d - w) * (d - w); return w / (t * t); });
        worst = std::max({worst, std::abs(q1 - averaging::lorentz_int1(1, gv, d)),
                          std::abs(q21 - averaging::lorentz_int2(1, 1, gv, d)),
                          std::abs(q22 - averaging::lorentz_int2(2, 1, gv, d))});
      }
    note("max deviation %.3e over gamma_v in {0.1,1,10}, delta in {0,1,5} (tolerance 1e-8)", worst);
    return worst <= 1e-8;
  });

  criterion(out, 9, "oracle average vs N2+N3, error ~ 1/Delta^2", [] {
    const double mu = std::numbers::sqrt2;
    const auto quad = averaging::QuadratureSpec::adaptive(1e-11);
    auto printed = [](const NormalizedParams& p) { return averaging::averaged_n3(p); };
    auto from_coherences = [&](const NormalizedParams& p) {
      return averaging::averaged_order3_from_coherences(p, quad);
    };
    bool ok = true;
    for (double gv : {0.0, 2.0})
      for (double a : {0.0, 1.0})
        for (double d : {0.0, 1.0}) ok = ladder(gv, a, d, mu, "N2+N3", printed) && ok;
    note("Diagnostics below are not part of the verdict.");
    note("Third-order term from the coherences (rho20 at third order fed into rho22):");
    for (double gv : {0.0, 2.0}) ladder(gv, 1.0, 1.0, mu, "  coherence N3", from_coherences);
    note("Control at mu=1, where N3 vanishes:");
    for (double gv : {0.0, 2.0}) ladder(gv, 1.0, 1.0, 1.0, "  mu=1", printed);
    if (!ok) {
      note("For A=1 the reduced third-order closed form is off by a factor 180/450 against the");
      note("exact third order at Omega=0, A=1, delta=1. N3 is odd in delta, so delta=0 hides it;");
      note("elsewhere the residual is O(eps) and the exponent drops to ~1. The coherence route");
      note("and the mu=1 control both scale as 1/Delta^2.");
    }
    return ok;
  });

  criterion(out, 10, "oracle structural suite", [] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double res = 0, herm = 0, trace = 0, parity = 0, range = 0, exchange = 0;
    for (int k = 0; k < 50; ++k) {
      const double big = (u(rng) < 0.5 ? -1 : 1) * std::pow(10.0, 1 + 3 * u(rng));
      const double phi = 0.1 + 2.9 * u(rng), a = 0.2 + 1.3 * u(rng), delta = -3 + 6 * u(rng);
      const double mu = 0.5 + 1.5 * u(rng), omega = -6 + 12 * u(rng);
      const auto s = oracle::solve_steady_state<double>({make(big, phi, a, delta, mu), omega, 7});
      res = std::max(res, s.residual);
      herm = std::max(herm, oracle::hermiticity_error(s.rho));
      trace = std::max(trace, oracle::trace_error(s.rho));
      parity = std::max(parity, oracle::parity_error(s.rho));
      for (int i = 0; i < 3; ++i) {
        const double pop = s.rho(i, i, 0).real();
        range = std::max({range, -pop, pop - 1.0, std::abs(s.rho(i, i, 0).imag())});
      }
      const auto swapped = oracle::solve_steady_state<double>({make(big, a * phi, 1 / a, delta, mu), -omega, 7});
      exchange = std::max(exchange, std::abs(oracle::dc_upper_population(s.rho) -
                                             oracle::dc_upper_population(swapped.rho)));
    }
    note("50 draws: residual %.2e, hermiticity %.2e, trace %.2e, parity %.2e, population range %.2e, beam exchange %.2e",
         res, herm, trace, parity, range, exchange);
    return res < 1e-10 && herm < 1e-10 && trace < 1e-10 && parity < 1e-10 && range < 1e-10 && exchange < 1e-10;
  });

  criterion(out, 11, "Gaussian vs Lorentzian width and Stark-ratio curves", [] {
    scan::FigureOptions opt;
    opt.gamma_v_max = 40;
    opt.points = 81;
    const auto f4 = scan::run_figure(4, opt);
    const auto f5 = scan::run_figure(5, opt);
    bool ok = true;
    auto rise_then_fall = [&](const std::vector<double>& g, const char* name) {
      const auto top = std::max_element(g.begin(), g.end()) - g.begin();
      bool fall = top > 0 && top + 1 < static_cast<long>(g.size());
      for (std::size_t k = top + 1; k < g.size(); ++k) fall = fall && g[k] < g[k - 1];
      const bool toward_two = std::abs(g.back() - 1.0) < 0.25 * std::abs(g[top] - 1.0);
      note("%s Gamma/2: starts %.6f, peaks %.5f at gamma_v=%g, ends %.5f", name, g.front(), g[top],
           f4.columns[0][top], g.back());
      return std::abs(g.front() - 1.0) < 1e-6 && fall && toward_two;
    };
    ok = rise_then_fall(f4.columns[1], "Lorentzian") && ok;
    ok = rise_then_fall(f4.columns[2], "Gaussian") && ok;
    double worst = 0;
    for (std::size_t k = 0; k < f4.rows(); ++k)
      worst = std::max(worst, std::abs(f4.columns[2][k] / f4.columns[1][k] - 1.0));
    note("max |Gaussian/Lorentzian - 1| of the widths = %.4f (limit 0.15)", worst);
    ok = ok && worst <= 0.15;

    for (int c : {1, 2}) {
      const auto& r = f5.columns[c];
      bool monotone = true;
      // Past the initial region: from gamma_v = 1 on.
      for (std::size_t k = 1; k < r.size(); ++k)
        if (f5.columns[0][k] >= 1.0) monotone = monotone && r[k] < r[k - 1];
      const bool start = std::abs(r.front() - 4.0 / 3.0) < 1e-3;
      const bool end = std::abs(r.back() - 0.5) < 0.05;
      note("%s SW/TW Stark ratio: %.6f at 0, %.5f at gamma_v=%g, monotone past 1: %s",
           c == 1 ? "Lorentzian" : "Gaussian", r.front(), r.back(), f5.columns[0].back(),
           monotone ? "yes" : "no");
      ok = ok && monotone && start && end;
    }
    return ok;
  });

  std::printf("\n%d passed, %d failed\n", out.passed, out.failed);
  return out.failed == 0 ? 0 : 1;
}
