#include "ssk/fluctuation_system.hpp"

#include <string>

#include "ssk/errors.hpp"

namespace ssk {

std::string_view to_string(MatrixVariant variant) {
  return variant == MatrixVariant::as_printed ? "as_printed" : "rederived";
}

MatrixVariant matrix_variant_from_string(std::string_view text) {
  if (text == "as_printed") return MatrixVariant::as_printed;
  if (text == "rederived") return MatrixVariant::rederived;
  throw ConfigError("unknown matrix variant '" + std::string(text) + "'");
}

Matrix7 assemble_m(const RSPoint& point, const YVector& y, MatrixVariant variant) {
  const double b2 = 2.0 * point.beta * point.beta;  // 2 beta^2
  const double h = point.h;
  const double hh = 0.5 * h;
  const auto [y1, y2, y3, y4, y5, y6, y7, y8, y9] = y;

  Matrix7 m = Matrix7::Zero();
  // M1: rows f1..f3, columns f1..f5
  m.row(0).head<5>() << b2 * y1, -4 * b2 * y2, 3 * b2 * y3, h * y4, -h * y5;
  m.row(1).head<5>() << b2 * y2, b2 * (y1 - 2 * y2 - 3 * y3), 3 * b2 * (-y2 + 2 * y3),
      hh * (y4 + y5), hh * (y4 - 3 * y5);
  m.row(2).head<5>() << b2 * y3, 4 * b2 * (y2 - 2 * y3), b2 * (y1 - 8 * y2 + 10 * y3), h * y5,
      h * (y4 - 2 * y5);

  // M2: rows f4..f7, columns f4..f7
  const double entry_54 = variant == MatrixVariant::as_printed ? y4 : y3;
  m.row(3).tail<4>() << b2 * (y1 - 2 * y2), b2 * (-2 * y2 + 3 * y3), hh * y4, hh * (y4 - 2 * y5);
  m.row(4).tail<4>() << b2 * (2 * y2 - 3 * entry_54), b2 * (y1 - 6 * y2 + 6 * y3), hh * y5,
      hh * (2 * y4 - 3 * y5);
  m.row(5).tail<4>() << -b2 * y6, b2 * y7, hh * y8, -hh * y9;
  m.row(6).tail<4>() << b2 * (y6 - 2 * y7), b2 * (-2 * y6 + 3 * y7), hh * y9, hh * (y8 - 2 * y9);
  return m;
}

double norm1(const Matrix7& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

FluctuationReport limiting_covariances(const RSPoint& point, MatrixVariant variant) {
  FluctuationReport rep;
  rep.point = point;
  rep.variant = variant;
  rep.wu = compute_wu(point);
  rep.y = compute_y(point);
  rep.m = assemble_m(point, rep.y, variant);
  const auto v = compute_v(point);
  rep.v = Eigen::Map<const Vector7>(v.data());
  rep.m_norm1 = norm1(rep.m);
  if (!(rep.m_norm1 < 1.0))
    throw RegionError("||M||_1 = " + std::to_string(rep.m_norm1) + " >= 1");

  const Matrix7 a = Matrix7::Identity() - rep.m;
  const Eigen::PartialPivLU<Matrix7> lu(a);
  rep.cond = norm1(a) * norm1(lu.inverse());
  if (!(rep.cond <= 1e6))
    throw RegionError("cond(I - M) = " + std::to_string(rep.cond) + " exceeds 1e6");
  rep.limits = lu.solve(rep.v);
  return rep;
}

Vector7 neumann_solve(const Matrix7& m, const Vector7& v, int terms) {
  Vector7 term = v;
  Vector7 sum = v;
  for (int k = 1; k <= terms; ++k) {
    term = m * term;
    sum += term;
  }
  return sum;
}

}  // namespace ssk
