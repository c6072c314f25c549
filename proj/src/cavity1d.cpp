#include "ssk/cavity1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ssk/errors.hpp"

namespace ssk {
namespace {

constexpr double kTailLog = -60.0;
constexpr int kMaxMomentOrder = 12;

// The density is integrated in the angle theta with eps = sqrt(N) sin(theta):
// the endpoint factor (1 - eps^2/N)^((N-3)/2) d eps becomes cos^(N-2)(theta)
// sqrt(N) d theta, which is smooth on the whole interval. Weights are kept in
// log-space and shifted by their maximum.
class CavityDensity {
 public:
  explicit CavityDensity(const CavityDensityParams& p) : p_(p) {
    if (p.n < 4) throw DomainError("cavity density needs N >= 4");
    if (!(p.b >= 0.0) || !std::isfinite(p.a)) throw DomainError("cavity density needs b >= 0, finite a");
    root_n_ = std::sqrt(static_cast<double>(p.n));
    theta_mode_ = std::asin(eps_mode() / root_n_);
    shift_ = log_weight(theta_mode_);
    lo_ = cutoff(-std::numbers::pi / 2, theta_mode_);
    hi_ = cutoff(std::numbers::pi / 2, theta_mode_);
  }

  // log of the theta-space weight, without the constant sqrt(N) Jacobian
  double log_weight(double theta) const {
    const double s = std::sin(theta);
    return 0.5 * (p_.n - 2) * std::log1p(-s * s) + p_.a * root_n_ * s - 0.5 * p_.b * p_.n * s * s;
  }

  double shift() const { return shift_; }
  double root_n() const { return root_n_; }

  // int f(eps) exp(log_weight - shift) d theta
  template <class F>
  double integrate(F&& f) const {
    auto integrand = [&](double theta) {
      const double w = std::exp(log_weight(theta) - shift_);
      return w == 0.0 ? 0.0 : f(root_n_ * std::sin(theta)) * w;
    };
    return piece(integrand, lo_, theta_mode_) + piece(integrand, theta_mode_, hi_);
  }

 private:
  // stationary point of the eps-space weight including the cos Jacobian,
  // which is log-concave, so the sign of the derivative changes once
  double eps_mode() const {
    const double n = p_.n;
    auto slope = [&](double e) { return -(n - 2) * e / (n - e * e) + p_.a - p_.b * e; };
    double lo = -root_n_;
    double hi = root_n_;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * root_n_; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // point between edge and mode where the shifted log-weight drops to the
  // tail threshold, or the edge itself
  double cutoff(double edge, double mode) const {
    auto excess = [&](double t) { return log_weight(t) - shift_ - kTailLog; };
    double outside = edge * (1.0 - 1e-15);
    if (excess(outside) >= 0.0) return edge;
    double inside = mode;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (inside + outside);
      (excess(mid) > 0.0 ? inside : outside) = mid;
    }
    return outside;
  }

  template <class F>
  static double piece(F& f, double a, double b) {
    if (b <= a) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 6, 1e-11, &error, &l1);
    if (!(error <= 1e-10 * l1 + 1e-300)) {
      std::ostringstream msg;
      msg << std::scientific << "cavity quadrature did not converge: error " << error << ", L1 " << l1;
      throw NumericError(msg.str());
    }
    return value;
  }

  CavityDensityParams p_;
  double root_n_ = 0.0;
  double theta_mode_ = 0.0;
  double shift_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

std::vector<double> moments_of(const CavityDensity& d, int kmax) {
  std::vector<double> s(kmax + 1);
  const double norm = d.integrate([](double) { return 1.0; });
  s[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) s[k] = d.integrate([k](double e) { return std::pow(e, k); }) / norm;
  return s;
}

}  // namespace

double log_z1(const CavityDensityParams& params) {
  const CavityDensity d(params);
  return std::log(d.integrate([](double) { return 1.0; })) + d.shift() + std::log(d.root_n());
}

double z1(const CavityDensityParams& params) { return std::exp(log_z1(params)); }

double s_moment(const CavityDensityParams& params, int k) {
  if (k < 0 || k > kMaxMomentOrder) throw ConfigError("moment order must lie in [0, 12]");
  return s_moments(params, k)[k];
}

std::vector<double> s_moments(const CavityDensityParams& params, int kmax) {
  if (kmax < 0 || kmax > kMaxMomentOrder) throw ConfigError("moment order must lie in [0, 12]");
  return moments_of(CavityDensity(params), kmax);
}

double recursion_residual(const CavityDensityParams& params, int k) {
  if (k < 1 || k > kMaxMomentOrder) throw ConfigError("residual order must lie in [1, 12]");
  const auto s = s_moments(params, k);
  const double inv = 1.0 / (params.b + 1.0);
  const double prev2 = k >= 2 ? s[k - 2] : 0.0;
  return s[k] - params.a * inv * s[k - 1] - (k - 1) * inv * prev2;
}

double recursion_residual_integrand(const CavityDensityParams& params, int k) {
  if (k < 1 || k > kMaxMomentOrder) throw ConfigError("residual order must lie in [1, 12]");
  const CavityDensity d(params);
  const double n = params.n;
  const double norm = d.integrate([](double) { return 1.0; });
  const double num = d.integrate([&](double e) {
    return std::pow(e, k) * (3.0 - e * e) * n / (n - e * e);
  });
  return num / norm / (n * (params.b + 1.0));
}

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw ConfigError("Gauss-Hermite order must be positive");
  // Jacobi matrix of the probabilists' Hermite polynomials
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  return rule;
}

double nu0_polynomial_quadrature(const EpsPolynomial& poly, const RSPoint& point, int n,
                                 int hermite_order, Execution exec) {
  if (hermite_order < 20) throw ConfigError("Gauss-Hermite order must be at least 20");
  int kmax = 0;
  for (const auto& [e, c] : poly.terms()) kmax = std::max({kmax, e[0], e[1], e[2], e[3]});

  const auto rule = gauss_hermite(hermite_order);
  const double sd = point.beta * std::sqrt(point.mixture.eval(point.q, 1));
  std::vector<double> contrib(rule.nodes.size(), 0.0);

  auto node_value = [&](std::size_t i) {
    const CavityDensityParams params{n, rule.nodes[i] * sd + point.h, point.b};
    const auto s = s_moments(params, kmax);
    double sum = 0.0;
    for (const auto& [e, c] : poly.terms()) sum += c * s[e[0]] * s[e[1]] * s[e[2]] * s[e[3]];
    return rule.weights[i] * sum;
  };

  const auto count = static_cast<long>(rule.nodes.size());
  if (exec == Execution::parallel) {
    // quadrature failures are rethrown after the parallel region
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      try {
        contrib[i] = node_value(i);
      } catch (const std::exception& ex) {
#pragma omp critical(ssk_quadrature_failure)
        failure = ex.what();
      }
    }
    if (!failure.empty()) throw NumericError(failure);
  } else {
    for (long i = 0; i < count; ++i) contrib[i] = node_value(i);
  }
  double total = 0.0;
  for (double c : contrib) total += c;
  return total;
}

double nu0_monomial_quadrature(const ReplicaMonomial& mono, const RSPoint& point, int n,
                               int hermite_order, Execution exec) {
  EpsPolynomial poly = EpsPolynomial::constant(1.0);
  for (int l = 0; l < mono.replicas(); ++l)
    for (int j = 0; j < mono.exponent(l); ++j) poly = poly * EpsPolynomial::eps(l);
  return nu0_polynomial_quadrature(poly, point, n, hermite_order, exec);
}

double richardson_limit(std::span<const int> ns, std::span<const double> values) {
  if (ns.size() != values.size() || ns.empty())
    throw ConfigError("richardson_limit needs matching, nonempty inputs");
  std::vector<double> x(ns.size());
  std::vector<double> p(values.begin(), values.end());
  for (std::size_t i = 0; i < ns.size(); ++i) x[i] = 1.0 / ns[i];
  // Neville's scheme evaluated at x = 0
  for (std::size_t m = 1; m < p.size(); ++m)
    for (std::size_t i = 0; i + m < p.size(); ++i)
      p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return p[0];
}

double phi(double x, double c, int n) {
  if (!(std::abs(x) < 1.0)) throw DomainError("phi needs |x| < 1");
  return c * x + (n - 3.0) / (2.0 * n) * std::log1p(-x * x);
}

double phi_max_numeric(double c, int n) {
  if (n < 4) throw DomainError("phi needs N >= 4");
  const double k = (n - 3.0) / n;
  auto slope = [&](double x) { return c - k * x / (1.0 - x * x); };
  double lo = -1.0;
  double hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double om = 1.0 - x * x;
    const double curvature = -k * (1.0 + x * x) / (om * om);
    const double step = slope(x) / curvature;
    const double next = x - step;
    if (!(next > lo && next < hi)) break;
    x = next;
    if (std::abs(step) <= 1e-17) break;
  }
  return x;
}

SaddlePoint x0_closed_form(double c_n) {
  if (!std::isfinite(c_n)) throw DomainError("c_N must be finite");
  const double root = std::sqrt(1.0 + 4.0 * c_n * c_n);
  SaddlePoint sp;
  sp.x0 = 2.0 * c_n / (1.0 + root);
  sp.x0_squared = sp.x0 * sp.x0;
  const double alternative = 1.0 - 2.0 / (1.0 + root);
  if (!(std::abs(sp.x0_squared - alternative) <= 1e-12))
    throw std::logic_error("saddle point: x0^2 forms disagree");
  return sp;
}

double field_free_energy(int n, double h) {
  if (n < 4) throw DomainError("field free energy needs N >= 4");
  const double nn = n;
  const double log_an = std::lgamma(0.5 * nn) - std::lgamma(0.5 * (nn - 1.0)) -
                        0.5 * std::log(std::numbers::pi) - 0.5 * std::log(nn);
  return (log_an + log_z1({n, h * std::sqrt(nn), 0.0})) / nn;
}

}  // namespace ssk
