#pragma once

#include <array>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "ssk/rs_solver.hpp"

namespace ssk {

inline constexpr int kMaxReplicas = 4;
inline constexpr int kMaxMonomialDegree = 8;

// Univariate polynomial in the cavity field a; coefficient i multiplies a^i.
class GammaPolynomial {
 public:
  GammaPolynomial() = default;
  explicit GammaPolynomial(std::vector<double> coefficients);

  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  double coefficient(int power) const;
  const std::vector<double>& coefficients() const { return coef_; }

  double operator()(double a) const;

  friend GammaPolynomial operator*(const GammaPolynomial& x, const GammaPolynomial& y);
  friend GammaPolynomial operator+(const GammaPolynomial& x, const GammaPolynomial& y);
  friend GammaPolynomial operator*(double s, const GammaPolynomial& x);

 private:
  std::vector<double> coef_{0.0};
};

// gamma_0 = 1, gamma_1 = a/(b+1), gamma_k = a/(b+1) gamma_{k-1} + (k-1)/(b+1) gamma_{k-2}
GammaPolynomial gamma_poly(int k, double b);

// E[(mean + sd Z)^m] for standard normal Z, m <= 16.
double gaussian_moment(int m, double mean, double sd);

// Exponents (k_1, ..., k_n) of eps_1^{k_1} ... eps_n^{k_n}, n <= 4, sum <= 8.
class ReplicaMonomial {
 public:
  ReplicaMonomial(std::initializer_list<int> exponents);
  explicit ReplicaMonomial(const std::vector<int>& exponents);

  int replicas() const { return n_; }
  int exponent(int replica) const { return exps_[replica]; }
  int total_degree() const;
  std::string to_string() const;

 private:
  std::array<int, kMaxReplicas> exps_{};
  int n_ = 0;
};

// Limiting value E gamma_{k_1}(a) ... gamma_{k_n}(a), one shared Gaussian a.
double nu0_monomial(const ReplicaMonomial& mono, const RSPoint& point);

struct WU {
  double w = 0.0;  // E (a/(b+1))^3
  double u = 0.0;  // E (a/(b+1))^4
};

WU compute_wu(const RSPoint& point);

// Multivariate polynomial in eps_1..eps_4. Keys are exponent tuples.
class EpsPolynomial {
 public:
  using Exponents = std::array<int, kMaxReplicas>;

  EpsPolynomial() = default;
  static EpsPolynomial constant(double c);
  // eps_l with 0-based replica index
  static EpsPolynomial eps(int replica);

  const std::map<Exponents, double>& terms() const { return terms_; }
  int total_degree() const;

  EpsPolynomial& operator+=(const EpsPolynomial& other);
  EpsPolynomial& operator-=(const EpsPolynomial& other);
  friend EpsPolynomial operator+(EpsPolynomial x, const EpsPolynomial& y) { return x += y; }
  friend EpsPolynomial operator-(EpsPolynomial x, const EpsPolynomial& y) { return x -= y; }
  friend EpsPolynomial operator*(const EpsPolynomial& x, const EpsPolynomial& y);
  friend EpsPolynomial operator*(double s, EpsPolynomial x);
  friend EpsPolynomial operator+(EpsPolynomial x, double c) { return x += constant(c); }
  friend EpsPolynomial operator-(EpsPolynomial x, double c) { return x -= constant(c); }

 private:
  void prune();
  std::map<Exponents, double> terms_;
};

// Linear extension of nu0_monomial over the monomials of poly.
double nu0_polynomial(const EpsPolynomial& poly, const RSPoint& point);

// a_l = 1 - eps_l^2 (0-based l)
EpsPolynomial cavity_a(int l);
// a_{l,l'} with 2 a_{l,l'} = xi'(q) - (eps_l^2 + eps_l'^2)(q xi''(q) + xi'(q))/2 + eps_l eps_l' xi''(q)
EpsPolynomial cavity_a(int l, int lp, const RSPoint& point);

struct RelationEntry {
  std::string label;
  double closed_form = 0.0;
  double engine = 0.0;
};

// The ten limiting moments, each by closed form and by the engine. Throws
// std::logic_error if any pair differs by more than 1e-12.
std::vector<RelationEntry> relations_table(const RSPoint& point);

using YVector = std::array<double, 9>;
using VVector = std::array<double, 7>;

// The nine centered cavity moments, as eps-polynomials (index j holds Y_{j+1}).
std::array<EpsPolynomial, 9> y_polynomials(const RSPoint& point);

YVector compute_y(const RSPoint& point);

// Closed forms for v_1..v_7. Cross-checks v_1 against its moment expansion.
VVector compute_v(const RSPoint& point);

// nu0(e1^2 e2^2) - q nu0(e1 e2) - q nu0(e1^3 e2) + q^2 nu0(e1^2)
double v1_from_moments(const RSPoint& point);

}  // namespace ssk
