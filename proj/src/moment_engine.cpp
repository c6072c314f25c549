#include "ssk/moment_engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ssk/errors.hpp"

namespace ssk {

GammaPolynomial::GammaPolynomial(std::vector<double> coefficients) : coef_(std::move(coefficients)) {
  if (coef_.empty()) coef_.push_back(0.0);
}

double GammaPolynomial::coefficient(int power) const {
  return power >= 0 && power <= degree() ? coef_[power] : 0.0;
}

double GammaPolynomial::operator()(double a) const {
  double acc = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * a + *it;
  return acc;
}

GammaPolynomial operator*(const GammaPolynomial& x, const GammaPolynomial& y) {
  std::vector<double> out(x.coef_.size() + y.coef_.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.coef_.size(); ++i)
    for (std::size_t j = 0; j < y.coef_.size(); ++j) out[i + j] += x.coef_[i] * y.coef_[j];
  return GammaPolynomial(std::move(out));
}

GammaPolynomial operator+(const GammaPolynomial& x, const GammaPolynomial& y) {
  std::vector<double> out(std::max(x.coef_.size(), y.coef_.size()), 0.0);
  for (std::size_t i = 0; i < x.coef_.size(); ++i) out[i] += x.coef_[i];
  for (std::size_t i = 0; i < y.coef_.size(); ++i) out[i] += y.coef_[i];
  return GammaPolynomial(std::move(out));
}

GammaPolynomial operator*(double s, const GammaPolynomial& x) {
  auto out = x.coef_;
  for (auto& c : out) c *= s;
  return GammaPolynomial(std::move(out));
}

GammaPolynomial gamma_poly(int k, double b) {
  if (k < 0 || k > kMaxMonomialDegree)
    throw ConfigError("gamma polynomial order must lie in [0, 8]");
  if (!(b >= 0.0)) throw DomainError("cavity coefficient b must be nonnegative");
  const double inv = 1.0 / (b + 1.0);
  GammaPolynomial prev({1.0});
  if (k == 0) return prev;
  GammaPolynomial cur({0.0, inv});
  const GammaPolynomial shift({0.0, inv});
  for (int j = 2; j <= k; ++j) {
    GammaPolynomial next = shift * cur + ((j - 1) * inv) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double gaussian_moment(int m, double mean, double sd) {
  if (m < 0 || m > 16) throw ConfigError("gaussian moment order must lie in [0, 16]");
  double sum = 0.0;
  double binom = 1.0;         // C(m, j)
  double double_fact = 1.0;   // (j-1)!! for even j
  for (int j = 0; j <= m; ++j) {
    if (j > 0) binom = binom * (m - j + 1) / j;
    if (j % 2 == 0) {
      if (j >= 2) double_fact *= j - 1;
      sum += binom * std::pow(mean, m - j) * std::pow(sd, j) * double_fact;
    }
  }
  return sum;
}

ReplicaMonomial::ReplicaMonomial(std::initializer_list<int> exponents)
    : ReplicaMonomial(std::vector<int>(exponents)) {}

ReplicaMonomial::ReplicaMonomial(const std::vector<int>& exponents) {
  if (exponents.empty() || exponents.size() > kMaxReplicas)
    throw ConfigError("replica monomial needs 1..4 exponents");
  n_ = static_cast<int>(exponents.size());
  for (int i = 0; i < n_; ++i) {
    if (exponents[i] < 0) throw ConfigError("replica exponents must be nonnegative");
    exps_[i] = exponents[i];
  }
  if (total_degree() > kMaxMonomialDegree) throw ConfigError("monomial total degree exceeds 8");
}

int ReplicaMonomial::total_degree() const {
  int s = 0;
  for (int i = 0; i < n_; ++i) s += exps_[i];
  return s;
}

std::string ReplicaMonomial::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < n_; ++i) os << (i ? "," : "") << exps_[i];
  os << ')';
  return os.str();
}

namespace {

double field_sd(const RSPoint& p) { return p.beta * std::sqrt(p.mixture.eval(p.q, 1)); }

double expect_in_field(const GammaPolynomial& poly, const RSPoint& p) {
  const double sd = field_sd(p);
  double sum = 0.0;
  for (int i = 0; i <= poly.degree(); ++i) {
    const double c = poly.coefficient(i);
    if (c != 0.0) sum += c * gaussian_moment(i, p.h, sd);
  }
  return sum;
}

double nu0_exponents(const EpsPolynomial::Exponents& e, const RSPoint& p) {
  GammaPolynomial prod({1.0});
  for (int k : e)
    if (k > 0) prod = prod * gamma_poly(k, p.b);
  return expect_in_field(prod, p);
}

}  // namespace

double nu0_monomial(const ReplicaMonomial& mono, const RSPoint& point) {
  EpsPolynomial::Exponents e{};
  for (int i = 0; i < mono.replicas(); ++i) e[i] = mono.exponent(i);
  return nu0_exponents(e, point);
}

WU compute_wu(const RSPoint& p) {
  const double om = 1.0 - p.q;
  const double xp = p.mixture.eval(p.q, 1);
  const double b2 = p.beta * p.beta;
  const double h = p.h;
  return {om * om * om * (3.0 * b2 * xp * h + h * h * h),
          om * om * om * om * (h * h * h * h + 6.0 * b2 * h * h * xp + 3.0 * b2 * b2 * xp * xp)};
}

EpsPolynomial EpsPolynomial::constant(double c) {
  EpsPolynomial p;
  if (c != 0.0) p.terms_[Exponents{}] = c;
  return p;
}

EpsPolynomial EpsPolynomial::eps(int replica) {
  if (replica < 0 || replica >= kMaxReplicas) throw ConfigError("replica index out of range");
  EpsPolynomial p;
  Exponents e{};
  e[replica] = 1;
  p.terms_[e] = 1.0;
  return p;
}

int EpsPolynomial::total_degree() const {
  int best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, e[0] + e[1] + e[2] + e[3]);
  return best;
}

void EpsPolynomial::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

EpsPolynomial& EpsPolynomial::operator+=(const EpsPolynomial& other) {
  for (const auto& [e, c] : other.terms_) terms_[e] += c;
  prune();
  return *this;
}

EpsPolynomial& EpsPolynomial::operator-=(const EpsPolynomial& other) {
  for (const auto& [e, c] : other.terms_) terms_[e] -= c;
  prune();
  return *this;
}

EpsPolynomial operator*(const EpsPolynomial& x, const EpsPolynomial& y) {
  EpsPolynomial out;
  for (const auto& [ex, cx] : x.terms_) {
    for (const auto& [ey, cy] : y.terms_) {
      EpsPolynomial::Exponents e;
      for (int i = 0; i < kMaxReplicas; ++i) e[i] = ex[i] + ey[i];
      out.terms_[e] += cx * cy;
    }
  }
  out.prune();
  if (out.total_degree() > kMaxMonomialDegree)
    throw ConfigError("eps-polynomial degree exceeds 8");
  return out;
}

EpsPolynomial operator*(double s, EpsPolynomial x) {
  for (auto& [e, c] : x.terms_) c *= s;
  x.prune();
  return x;
}

double nu0_polynomial(const EpsPolynomial& poly, const RSPoint& point) {
  if (poly.total_degree() > kMaxMonomialDegree) throw ConfigError("eps-polynomial degree exceeds 8");
  double sum = 0.0;
  for (const auto& [e, c] : poly.terms()) sum += c * nu0_exponents(e, point);
  return sum;
}

EpsPolynomial cavity_a(int l) { return EpsPolynomial::constant(1.0) - EpsPolynomial::eps(l) * EpsPolynomial::eps(l); }

EpsPolynomial cavity_a(int l, int lp, const RSPoint& p) {
  const double xp = p.mixture.eval(p.q, 1);
  const double xpp = p.mixture.eval(p.q, 2);
  const auto el = EpsPolynomial::eps(l);
  const auto elp = EpsPolynomial::eps(lp);
  EpsPolynomial twice = EpsPolynomial::constant(xp) -
                        (0.5 * (p.q * xpp + xp)) * (el * el + elp * elp) + xpp * (el * elp);
  return 0.5 * twice;
}

std::vector<RelationEntry> relations_table(const RSPoint& p) {
  const auto [w, u] = compute_wu(p);
  const double q = p.q;
  const double om2 = (1.0 - q) * (1.0 - q);
  std::vector<RelationEntry> rows = {
      {"e1", p.r, nu0_monomial({1}, p)},
      {"e1 e2", q, nu0_monomial({1, 1}, p)},
      {"e1^2", 1.0, nu0_monomial({2}, p)},
      {"e1 e2 e3", w, nu0_monomial({1, 1, 1}, p)},
      {"e1 e2^2", w + p.h * om2, nu0_monomial({1, 2}, p)},
      {"e1^3", w + 3.0 * p.h * om2, nu0_monomial({3}, p)},
      {"e1^2 e2^2", u + 1.0 - q * q, nu0_monomial({2, 2}, p)},
      {"e1 e2 e3^2", u + q - q * q, nu0_monomial({1, 1, 2}, p)},
      {"e1 e2^3", u + 3.0 * q - 3.0 * q * q, nu0_monomial({1, 3}, p)},
      {"e1 e2 e3 e4", u, nu0_monomial({1, 1, 1, 1}, p)},
  };
  for (const auto& row : rows) {
    if (!(std::abs(row.closed_form - row.engine) <= 1e-12))
      throw std::logic_error("moment engine disagrees with closed form for " + row.label);
  }
  return rows;
}

std::array<EpsPolynomial, 9> y_polynomials(const RSPoint& p) {
  const auto e1 = EpsPolynomial::eps(0);
  const auto e2 = EpsPolynomial::eps(1);
  const EpsPolynomial overlap = e1 * e2 - p.q;
  const EpsPolynomial magnet = e1 - p.r;
  return {cavity_a(0, 1, p) * overlap, cavity_a(0, 2, p) * overlap, cavity_a(2, 3, p) * overlap,
          cavity_a(0) * overlap,       cavity_a(2) * overlap,       cavity_a(0, 1, p) * magnet,
          cavity_a(1, 2, p) * magnet,  cavity_a(0) * magnet,        cavity_a(1) * magnet};
}

YVector compute_y(const RSPoint& point) {
  const auto polys = y_polynomials(point);
  YVector y{};
  for (std::size_t j = 0; j < polys.size(); ++j) y[j] = nu0_polynomial(polys[j], point);
  return y;
}

double v1_from_moments(const RSPoint& p) {
  const double q = p.q;
  return nu0_monomial({2, 2}, p) - q * nu0_monomial({1, 1}, p) - q * nu0_monomial({3, 1}, p) +
         q * q * nu0_monomial({2}, p);
}

VVector compute_v(const RSPoint& p) {
  const auto [w, u] = compute_wu(p);
  const double q = p.q;
  const double r = p.r;
  VVector v = {
      (1 - q) * u + 1 - 4 * q * q + 3 * q * q * q,
      (1 - q) * u + q * (1 - q) * (1 - 2 * q),
      (1 - q) * u - q * q * (1 - q),
      w - 0.5 * r * u + 0.5 * r * (2 - 6 * q + 3 * q * q),
      w - 0.5 * r * u + 0.5 * r * (-2 * q + q * q),
      -0.5 * r * w + 1 + 0.5 * r * r * (-4 + 3 * q),
      -0.5 * r * w + q + 0.5 * r * r * (-2 + q),
  };
  if (!(std::abs(v[0] - v1_from_moments(p)) <= 1e-12))
    throw std::logic_error("v1 closed form disagrees with its moment expansion");
  return v;
}

}  // namespace ssk
