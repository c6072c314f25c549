#include "ssk/rs_solver.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ssk/errors.hpp"

namespace ssk {
namespace detail {

namespace {
constexpr int kScanPoints = 10000;
constexpr double kScanTop = 1.0 - 1e-6;
}  // namespace

double critical_residual(const MixturePolynomial& mixture, double beta, double h, double scale,
                         double q) {
  const double one_minus = 1.0 - q;
  return q / (one_minus * one_minus) - scale * (h * h + beta * beta * mixture.eval(q, 1));
}

RootScan scan_roots(const MixturePolynomial& mixture, double beta, double h, double scale) {
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  RootScan scan;
  const double g0 = critical_residual(mixture, beta, h, scale, 0.0);
  int last_sign = sign(g0);
  bool in_zero = last_sign == 0;
  scan.root_at_zero = in_zero;
  scan.roots = in_zero ? 1 : 0;
  double prev_q = 0.0;
  for (int i = 1; i < kScanPoints; ++i) {
    const double q = kScanTop * i / (kScanPoints - 1);
    const int s = sign(critical_residual(mixture, beta, h, scale, q));
    if (s == 0) {
      // a run of exact zeros is one root
      if (!in_zero) {
        ++scan.roots;
        scan.lo = scan.hi = q;
      }
      in_zero = true;
    } else {
      if (!in_zero && s != last_sign) {
        ++scan.roots;
        scan.lo = prev_q;
        scan.hi = q;
      }
      in_zero = false;
      last_sign = s;
    }
    prev_q = q;
  }
  return scan;
}

}  // namespace detail

namespace {

double polish_root(const MixturePolynomial& mixture, double beta, double h, double scale,
                   double lo, double hi, double tol) {
  auto g = [&](double q) { return detail::critical_residual(mixture, beta, h, scale, q); };
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon(); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  double q = 0.5 * (lo + hi);
  // Newton polish inside the final bracket
  for (int it = 0; it < 4; ++it) {
    const double om = 1.0 - q;
    const double dg = (1.0 + q) / (om * om * om) - scale * beta * beta * mixture.eval(q, 2);
    if (dg == 0.0) break;
    const double next = q - g(q) / dg;
    if (!(next >= lo && next <= hi)) break;
    if (std::abs(g(next)) >= std::abs(g(q))) break;
    q = next;
  }
  if (std::abs(g(q)) > tol)
    throw NumericError("critical-point residual " + std::to_string(g(q)) + " exceeds tolerance");
  return std::min(q, 1.0 - kQCeiling);
}

double solve_scaled(const MixturePolynomial& mixture, double beta, double h, double scale,
                    double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(beta >= 0.0) || !std::isfinite(h)) throw ConfigError("need beta >= 0 and finite h");
  const auto scan = detail::scan_roots(mixture, beta, h, scale);
  if (scan.roots != 1)
    throw RegionError("critical-point equation has " + std::to_string(scan.roots) +
                      " roots in [0, 1)");
  if (scan.root_at_zero) return 0.0;
  return polish_root(mixture, beta, h, scale, scan.lo, scan.hi, tol);
}

// bracketed functional of the variational formula, without the factor 1/2
double rs_functional(const MixturePolynomial& mixture, double beta, double h, double q) {
  const double b2 = beta * beta;
  return h * h * (1.0 - q) + q / (1.0 - q) + std::log1p(-q) + b2 * mixture.at_one() -
         b2 * mixture.eval(q, 0);
}

}  // namespace

double solve_q(const MixturePolynomial& mixture, double beta, double h, double tol) {
  return solve_scaled(mixture, beta, h, 1.0, tol);
}

RSPoint rs_point(const MixturePolynomial& mixture, double beta, double h, double tol) {
  RSPoint p{beta, h, 0.0, 0.0, 0.0, mixture};
  p.q = solve_q(mixture, beta, h, tol);
  p.r = h * (1.0 - p.q);
  p.b = h * h * (1.0 - p.q) + beta * beta * (1.0 - p.q) * mixture.eval(p.q, 1);
  return p;
}

double free_energy_rs(const RSPoint& point) {
  return 0.5 * rs_functional(point.mixture, point.beta, point.h, point.q);
}

VariationalResult free_energy_variational(const MixturePolynomial& mixture, double beta,
                                          double h) {
  auto f = [&](double q) { return rs_functional(mixture, beta, h, q); };
  constexpr int kGrid = 4000;
  const double top = 1.0 - 1e-6;
  std::vector<double> values(kGrid);
  for (int i = 0; i < kGrid; ++i) values[i] = f(top * i / (kGrid - 1));

  int minima = 0;
  int best = 0;
  for (int i = 0; i < kGrid; ++i) {
    const bool left_ok = i == 0 || values[i] < values[i - 1];
    const bool right_ok = i == kGrid - 1 || values[i] <= values[i + 1];
    if (left_ok && right_ok) {
      ++minima;
      best = i;
    }
  }
  if (minima != 1)
    throw RegionError("free-energy functional has " + std::to_string(minima) + " local minima");

  // golden-section on the grid cell pair around the discrete minimum
  double lo = top * std::max(best - 1, 0) / (kGrid - 1);
  double hi = top * std::min(best + 1, kGrid - 1) / (kGrid - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double q = 0.5 * (lo + hi);

  // The derivative of the functional is the critical-point residual; polish with
  // Newton on it unless the minimum sits on the q = 0 boundary.
  auto g = [&](double x) { return detail::critical_residual(mixture, beta, h, 1.0, x); };
  if (g(0.0) >= 0.0 && f(0.0) <= f(q)) {
    q = 0.0;
  } else {
    for (int it = 0; it < 20; ++it) {
      const double om = 1.0 - q;
      const double dg = (1.0 + q) / (om * om * om) - beta * beta * mixture.eval(q, 2);
      const double step = g(q) / dg;
      q = std::clamp(q - step, 0.0, 1.0 - kQCeiling);
      if (std::abs(step) < 1e-16) break;
    }
  }
  return {0.5 * f(q), q};
}

double solve_q_finite_n(const MixturePolynomial& mixture, double beta, double h, int n,
                        double tol) {
  if (n < 4) throw ConfigError("finite-N fixed point needs N >= 4");
  const double ratio = static_cast<double>(n) / (n - 3);
  return solve_scaled(mixture, beta, h, ratio * ratio, tol);
}

}  // namespace ssk
