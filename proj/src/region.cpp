#include <cmath>
#include <limits>

#include "ssk/fluctuation_system.hpp"
#include "ssk/rs_solver.hpp"

namespace ssk {

RegionDiagnostics high_temp_check(const MixturePolynomial& mixture, double beta, double h) {
  RegionDiagnostics d;
  d.m_norm1 = std::numeric_limits<double>::quiet_NaN();
  const auto scan = detail::scan_roots(mixture, beta, h, 1.0);
  d.roots = scan.roots;
  d.root_at_zero = scan.root_at_zero;
  if (scan.roots != 1) {
    d.reason = "critical-point equation has " + std::to_string(scan.roots) + " roots";
    return d;
  }
  const RSPoint point = rs_point(mixture, beta, h);
  d.m_norm1 = norm1(assemble_m(point, compute_y(point)));
  d.pass = d.m_norm1 < 1.0;
  if (!d.pass) d.reason = "||M||_1 = " + std::to_string(d.m_norm1) + " >= 1";
  return d;
}

}  // namespace ssk
