#pragma once

#include <string>

#include "ssk/mixture.hpp"

namespace ssk {

inline constexpr double kDefaultTol = 1e-12;
// q is kept at most 1 - kQCeiling so that 1/(1-q) stays finite.
inline constexpr double kQCeiling = 1e-9;

// A solved replica-symmetric state.
struct RSPoint {
  double beta = 0.0;
  double h = 0.0;
  double q = 0.0;  // overlap fixed point
  double r = 0.0;  // limiting magnetization h(1-q)
  double b = 0.0;  // cavity quadratic coefficient, (b+1)(1-q) = 1
  MixturePolynomial mixture{std::vector<MixtureTerm>{{2, 1.0}}};
};

// Root of q/(1-q)^2 = h^2 + beta^2 xi'(q) on [0, 1). Throws RegionError unless
// the sign scan finds exactly one root.
double solve_q(const MixturePolynomial& mixture, double beta, double h, double tol = kDefaultTol);

RSPoint rs_point(const MixturePolynomial& mixture, double beta, double h, double tol = kDefaultTol);

// 1/2 (h^2(1-q) + q/(1-q) + log(1-q) + beta^2 xi(1) - beta^2 xi(q))
double free_energy_rs(const RSPoint& point);

struct VariationalResult {
  double free_energy = 0.0;
  double q_argmin = 0.0;
};

// Direct minimization of the bracketed free-energy functional over q.
VariationalResult free_energy_variational(const MixturePolynomial& mixture, double beta, double h);

// Finite-N analogue: q/(1-q)^2 = (N/(N-3))^2 (beta^2 xi'(q) + h^2).
double solve_q_finite_n(const MixturePolynomial& mixture, double beta, double h, int n,
                        double tol = kDefaultTol);

struct RegionDiagnostics {
  int roots = 0;            // roots of the critical-point equation found by the grid scan
  bool root_at_zero = false;
  double m_norm1 = 0.0;     // max column sum of |M|, NaN when not computed
  bool pass = false;
  std::string reason;
};

// Scans the critical-point residual on a 10^4-point grid and, when the root is
// unique, assembles M and checks ||M||_1 < 1.
RegionDiagnostics high_temp_check(const MixturePolynomial& mixture, double beta, double h);

namespace detail {

struct RootScan {
  int roots = 0;
  bool root_at_zero = false;
  double lo = 0.0;  // bracket of the unique root when roots == 1
  double hi = 0.0;
};

// Residual q/(1-q)^2 - scale (h^2 + beta^2 xi'(q)).
double critical_residual(const MixturePolynomial& mixture, double beta, double h, double scale,
                         double q);

RootScan scan_roots(const MixturePolynomial& mixture, double beta, double h, double scale);

}  // namespace detail

}  // namespace ssk
