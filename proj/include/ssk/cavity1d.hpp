#pragma once

#include <span>
#include <vector>

#include "ssk/moment_engine.hpp"
#include "ssk/rs_solver.hpp"

namespace ssk {

// 1-D cavity density on [-sqrt(N), sqrt(N)]:
//   (1 - eps^2/N)^((N-3)/2) exp(a eps - b eps^2 / 2)
struct CavityDensityParams {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
};

// log of the unnormalized integral Z1 (relative error <= 1e-12).
double log_z1(const CavityDensityParams& params);
double z1(const CavityDensityParams& params);

// S_k = <eps^k>, k <= 12.
double s_moment(const CavityDensityParams& params, int k);
// S_0..S_kmax from one density setup.
std::vector<double> s_moments(const CavityDensityParams& params, int kmax);

// S_k - a/(b+1) S_{k-1} - (k-1)/(b+1) S_{k-2}, from quadrature moments.
double recursion_residual(const CavityDensityParams& params, int k);

// 1/(N(b+1)) <eps^k (3 - eps^2) (1 - eps^2/N)^{-1}>, the closed integrand of r_k.
double recursion_residual_integrand(const CavityDensityParams& params, int k);

struct GaussHermiteRule {
  std::vector<double> nodes;    // for a standard normal variable
  std::vector<double> weights;  // sum to 1
};

// Probabilists' rule: E f(Z) ~ sum_i w_i f(z_i). Golub-Welsch.
GaussHermiteRule gauss_hermite(int order);

enum class Execution { serial, parallel };

// E_z prod_l S_{k_l}(a(z)) with a(z) = z beta sqrt(xi'(q)) + h, at finite N.
double nu0_monomial_quadrature(const ReplicaMonomial& mono, const RSPoint& point, int n,
                               int hermite_order = 40, Execution exec = Execution::parallel);

// Linear extension of the above over an eps-polynomial.
double nu0_polynomial_quadrature(const EpsPolynomial& poly, const RSPoint& point, int n,
                                 int hermite_order = 40, Execution exec = Execution::parallel);

// Polynomial extrapolation of values(N) to 1/N -> 0 (Neville).
double richardson_limit(std::span<const int> ns, std::span<const double> values);

// phi(x) = c x + (N-3)/(2N) log(1 - x^2)
double phi(double x, double c, int n);
// Maximizer of phi by safeguarded Newton on phi'.
double phi_max_numeric(double c, int n);

struct SaddlePoint {
  double x0 = 0.0;
  double x0_squared = 0.0;  // x0 * x0, checked against 1 - 2/(1 + sqrt(1 + 4 c^2))
};

// x0 = 2 c / (1 + sqrt(1 + 4 c^2)), the maximizer of phi in terms of c_N = N c / (N-3).
SaddlePoint x0_closed_form(double c_n);

// (1/N) log[ a_N int (1 - eps^2/N)^((N-3)/2) exp(h sqrt(N) eps) d eps ]: the
// free energy of the field-only model on the sphere (beta = 0).
double field_free_energy(int n, double h);

}  // namespace ssk
