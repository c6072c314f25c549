#pragma once

#include <array>
#include <string_view>

#include <Eigen/Dense>

#include "ssk/moment_engine.hpp"
#include "ssk/rs_solver.hpp"

namespace ssk {

using Matrix7 = Eigen::Matrix<double, 7, 7>;
using Vector7 = Eigen::Matrix<double, 7, 1>;

// Entry (5,4) of M is printed as 2 beta^2 (2 Y2 - 3 Y4). Re-deriving that row
// from the interpolation derivative gives 2 beta^2 (2 Y2 - 3 Y3).
enum class MatrixVariant { as_printed, rederived };

std::string_view to_string(MatrixVariant variant);
MatrixVariant matrix_variant_from_string(std::string_view text);

// Report keys for the seven limits, in the order f1..f7.
inline constexpr std::array<std::string_view, 7> kLimitNames = {
    "N_var_R12", "N_cov_R12_R13", "N_cov_R12_R34", "N_cov_R12_R1",
    "N_cov_R12_R3", "N_var_R1", "N_cov_R1_R2"};

// Rows are f1..f7. Rows 1-3 use columns 1-5, rows 4-7 use columns 4-7.
Matrix7 assemble_m(const RSPoint& point, const YVector& y,
                   MatrixVariant variant = MatrixVariant::as_printed);

double norm1(const Matrix7& m);

struct FluctuationReport {
  RSPoint point;
  WU wu;
  YVector y{};
  Matrix7 m = Matrix7::Zero();
  Vector7 v = Vector7::Zero();
  Vector7 limits = Vector7::Zero();  // lim N nu(f_l)
  double cond = 1.0;                 // 1-norm condition number of I - M
  double m_norm1 = 0.0;
  MatrixVariant variant = MatrixVariant::as_printed;
};

// Solves (I - M) x = v by partial-pivot LU. Throws RegionError when
// ||M||_1 >= 1 or cond(I - M) > 1e6.
FluctuationReport limiting_covariances(const RSPoint& point,
                                       MatrixVariant variant = MatrixVariant::as_printed);

// sum_{k <= terms} M^k v
Vector7 neumann_solve(const Matrix7& m, const Vector7& v, int terms = 40);

}  // namespace ssk
