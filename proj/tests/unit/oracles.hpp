#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// plain bisection, f(lo) and f(hi) of opposite sign
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// composite trapezoid
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int panels) {
  const double step = (b - a) / panels;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < panels; ++i) sum += f(a + i * step);
  return sum * step;
}

// E f(Z), Z standard normal, by trapezoid on [-12, 12]
inline double normal_expectation(const std::function<double(double)>& f, int panels = 2400) {
  return trapezoid([&](double z) { return f(z) * std::exp(-0.5 * z * z); }, -12.0, 12.0, panels) /
         std::sqrt(2.0 * std::numbers::pi);
}

// 5-point probabilists' Gauss-Hermite rule, exact through degree 9
struct Rule5 {
  std::array<double, 5> x;
  std::array<double, 5> w;
};
inline Rule5 hermite5() {
  const double s10 = std::sqrt(10.0);
  const double x1 = std::sqrt(5.0 - s10);
  const double x2 = std::sqrt(5.0 + s10);
  const double w1 = (7.0 + 2.0 * s10) / 60.0;
  const double w2 = (7.0 - 2.0 * s10) / 60.0;
  return {{-x2, -x1, 0.0, x1, x2}, {w2, w1, 8.0 / 15.0, w1, w2}};
}

// Quadratic mixture p2 only: xi(x) = w x^2 and friends.
struct Quad {
  double w = 1.0;
  double xi(double x) const { return w * x * x; }
  double d1(double x) const { return 2 * w * x; }
  double d2(double) const { return 2 * w; }
};

struct Point {
  double beta, h, q, r, b;
  Quad xi;
};

inline Point fixed_point(double beta, double h, Quad xi = {}) {
  auto g = [&](double q) { return q / ((1 - q) * (1 - q)) - h * h - beta * beta * xi.d1(q); };
  double q = 0.0;
  if (g(0.0) < 0.0) q = bisect(g, 0.0, 0.5);
  return {beta, h, q, h * (1 - q), 1.0 / (1 - q) - 1.0, xi};
}

// nu0 of a function of four replicas, from the limiting cavity law: given the
// field a ~ Normal(h, beta^2 xi'(q)), the eps_l are iid Normal(a/(b+1), 1/(b+1)).
inline double nu0(const Point& p, const std::function<double(const std::array<double, 4>&)>& g) {
  const auto rule = hermite5();
  const double sd_a = p.beta * std::sqrt(p.xi.d1(p.q));
  const double sd_e = 1.0 / std::sqrt(p.b + 1.0);
  return normal_expectation(
      [&](double z) {
        const double mean = (z * sd_a + p.h) / (p.b + 1.0);
        double sum = 0.0;
        std::array<double, 4> e{};
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k)
              for (int l = 0; l < 5; ++l) {
                e = {mean + sd_e * rule.x[i], mean + sd_e * rule.x[j], mean + sd_e * rule.x[k],
                     mean + sd_e * rule.x[l]};
                sum += rule.w[i] * rule.w[j] * rule.w[k] * rule.w[l] * g(e);
              }
        return sum;
      },
      400);
}

inline double a_single(const std::array<double, 4>& e, int l) { return 1 - e[l] * e[l]; }

inline double a_pair(const Point& p, const std::array<double, 4>& e, int l, int m) {
  const double d1 = p.xi.d1(p.q);
  const double d2 = p.xi.d2(p.q);
  return 0.5 * (d1 - 0.5 * (e[l] * e[l] + e[m] * e[m]) * (p.q * d2 + d1) + e[l] * e[m] * d2);
}

inline std::array<double, 9> y_values(const Point& p) {
  auto ov = [&](const std::array<double, 4>& e) { return e[0] * e[1] - p.q; };
  auto mg = [&](const std::array<double, 4>& e) { return e[0] - p.r; };
  using E = std::array<double, 4>;
  return {
      nu0(p, [&](const E& e) { return a_pair(p, e, 0, 1) * ov(e); }),
      nu0(p, [&](const E& e) { return a_pair(p, e, 0, 2) * ov(e); }),
      nu0(p, [&](const E& e) { return a_pair(p, e, 2, 3) * ov(e); }),
      nu0(p, [&](const E& e) { return a_single(e, 0) * ov(e); }),
      nu0(p, [&](const E& e) { return a_single(e, 2) * ov(e); }),
      nu0(p, [&](const E& e) { return a_pair(p, e, 0, 1) * mg(e); }),
      nu0(p, [&](const E& e) { return a_pair(p, e, 1, 2) * mg(e); }),
      nu0(p, [&](const E& e) { return a_single(e, 0) * mg(e); }),
      nu0(p, [&](const E& e) { return a_single(e, 1) * mg(e); }),
  };
}

// 1-D cavity density moments by trapezoid directly in eps on [-sqrt(N), sqrt(N)]
inline double cavity_moment(int n, double a, double b, int k, int panels = 200000) {
  const double edge = std::sqrt(static_cast<double>(n));
  auto w = [&](double e) {
    const double base = 1.0 - e * e / n;
    if (base <= 0.0) return 0.0;
    return std::exp(0.5 * (n - 3) * std::log(base) + a * e - 0.5 * b * e * e);
  };
  const double z = trapezoid(w, -edge, edge, panels);
  return trapezoid([&](double e) { return std::pow(e, k) * w(e); }, -edge, edge, panels) / z;
}

// golden-section maximum of a unimodal f on [lo, hi]
inline double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
