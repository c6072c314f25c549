#include <doctest.h>

#include <cmath>

#include "ssk/errors.hpp"
#include "ssk/fluctuation_system.hpp"
#include "ssk/rs_solver.hpp"

using ssk::MatrixVariant;
using ssk::MixturePolynomial;

namespace {
const MixturePolynomial kP2 = MixturePolynomial::parse("p2:1.0");
}

TEST_SUITE("fluctuation_system") {
  TEST_CASE("block structure") {
    const auto p = ssk::rs_point(kP2, 0.2, 0.3);
    const auto m = ssk::assemble_m(p, ssk::compute_y(p));
    for (int i = 0; i < 3; ++i)
      for (int j = 5; j < 7; ++j) CHECK(m(i, j) == 0.0);
    for (int i = 3; i < 7; ++i)
      for (int j = 0; j < 3; ++j) CHECK(m(i, j) == 0.0);
  }

  TEST_CASE("variants differ in one entry") {
    const auto p = ssk::rs_point(kP2, 0.2, 0.3);
    const auto y = ssk::compute_y(p);
    const ssk::Matrix7 diff = ssk::assemble_m(p, y, MatrixVariant::as_printed) -
                              ssk::assemble_m(p, y, MatrixVariant::rederived);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        if (i != 4 || j != 3) CHECK(diff(i, j) == 0.0);
    CHECK(diff(4, 3) == doctest::Approx(2 * 0.04 * -3 * (y[3] - y[2])).epsilon(1e-14));
  }

  TEST_CASE("headline limits, as printed") {
    const auto rep = ssk::limiting_covariances(ssk::rs_point(kP2, 0.2, 0.3));
    const double frozen[7] = {1.05237842, 0.07504307, 0.00254593, 0.23276215,
                              0.0137419, 0.78958426, 0.00758372};
    for (int l = 0; l < 7; ++l) CHECK(std::abs(rep.limits[l] - frozen[l]) < 5e-8);
    CHECK(rep.m_norm1 == doctest::Approx(0.2167).epsilon(2e-4));
    CHECK(rep.cond < 2.0);
  }

  TEST_CASE("headline limits, rederived") {
    const auto rep = ssk::limiting_covariances(ssk::rs_point(kP2, 0.2, 0.3), MatrixVariant::rederived);
    const double frozen[7] = {1.05236467, 0.07524509, 0.00296373, 0.23285079,
                              0.00476814, 0.78958128, 0.00786631};
    for (int l = 0; l < 7; ++l) CHECK(std::abs(rep.limits[l] - frozen[l]) < 5e-8);
    CHECK(rep.m_norm1 == doctest::Approx(0.1801).epsilon(3e-4));
  }

  TEST_CASE("uniform sphere limits") {
    const auto rep = ssk::limiting_covariances(ssk::rs_point(kP2, 0.0, 0.0));
    const double expect[7] = {1, 0, 0, 0, 0, 1, 0};
    for (int l = 0; l < 7; ++l) CHECK(rep.limits[l] == doctest::Approx(expect[l]).epsilon(1e-14));
  }

  TEST_CASE("limits solve (I - M) x = v and agree with the Neumann series") {
    for (auto [beta, h] : {std::pair{0.2, 0.3}, std::pair{0.1, 0.5}, std::pair{0.3, 0.1}}) {
      const auto rep = ssk::limiting_covariances(ssk::rs_point(kP2, beta, h));
      const ssk::Vector7 residual = rep.limits - rep.m * rep.limits - rep.v;
      CHECK(residual.cwiseAbs().maxCoeff() < 1e-14);
      const ssk::Vector7 series = ssk::neumann_solve(rep.m, rep.v, 60);
      CHECK((series - rep.limits).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("norm1 is the max column sum") {
    ssk::Matrix7 m = ssk::Matrix7::Zero();
    m(0, 2) = -0.5;
    m(3, 2) = 0.25;
    m(1, 1) = 0.6;
    CHECK(ssk::norm1(m) == 0.75);
  }

  TEST_CASE("outside the region") {
    CHECK_THROWS_AS(ssk::limiting_covariances(ssk::rs_point(kP2, 1.5, 0.3)), ssk::RegionError);
  }

  TEST_CASE("variant names") {
    CHECK(ssk::to_string(MatrixVariant::as_printed) == "as_printed");
    CHECK(ssk::matrix_variant_from_string("rederived") == MatrixVariant::rederived);
    CHECK_THROWS_AS(ssk::matrix_variant_from_string("fixed"), ssk::ConfigError);
  }
}
