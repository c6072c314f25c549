#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssk/errors.hpp"
#include "ssk/moment_engine.hpp"
#include "ssk/rs_solver.hpp"

using ssk::EpsPolynomial;
using ssk::MixturePolynomial;
using ssk::ReplicaMonomial;

namespace {
const MixturePolynomial kP2 = MixturePolynomial::parse("p2:1.0");

ssk::RSPoint headline() { return ssk::rs_point(kP2, 0.2, 0.3); }
}  // namespace

TEST_SUITE("moment_engine") {
  TEST_CASE("gamma_4 at b = 0 is a^4 + 6a^2 + 3") {
    const auto g = ssk::gamma_poly(4, 0.0);
    CHECK(g.degree() == 4);
    CHECK(g.coefficient(0) == 3.0);
    CHECK(g.coefficient(1) == 0.0);
    CHECK(g.coefficient(2) == 6.0);
    CHECK(g.coefficient(3) == 0.0);
    CHECK(g.coefficient(4) == 1.0);
  }

  TEST_CASE("gamma_k(a) are moments of Normal(a/(b+1), 1/(b+1))") {
    for (double b : {0.0, 0.0886551, 0.7}) {
      for (double a : {-1.3, 0.0, 0.3, 2.0}) {
        const double mean = a / (b + 1), sd = 1 / std::sqrt(b + 1);
        for (int k = 0; k <= 8; ++k) {
          const double expect = oracle::normal_expectation([&](double z) { return std::pow(mean + sd * z, k); });
          CHECK(ssk::gamma_poly(k, b)(a) == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("gaussian moments against quadrature and sampling") {
    for (int m = 0; m <= 16; ++m) {
      const double expect = oracle::normal_expectation([&](double z) { return std::pow(0.3 + 0.4 * z, m); });
      CHECK(ssk::gaussian_moment(m, 0.3, 0.4) == doctest::Approx(expect).epsilon(1e-12));
    }
    std::mt19937_64 gen(42);
    std::normal_distribution<double> nd(0.3, 0.4);
    double s2 = 0, s4 = 0;
    const int count = 400000;
    for (int i = 0; i < count; ++i) {
      const double x = nd(gen);
      s2 += x * x;
      s4 += x * x * x * x;
    }
    CHECK(std::abs(s2 / count - ssk::gaussian_moment(2, 0.3, 0.4)) < 5 * 0.3 / std::sqrt(count));
    CHECK(std::abs(s4 / count - ssk::gaussian_moment(4, 0.3, 0.4)) < 5 * 0.2 / std::sqrt(count));
    CHECK_THROWS_AS(ssk::gaussian_moment(17, 0, 1), ssk::ConfigError);
  }

  TEST_CASE("replica monomials against the limiting cavity law") {
    const auto p = headline();
    const auto o = oracle::fixed_point(0.2, 0.3);
    using E = std::array<double, 4>;
    struct Case {
      ReplicaMonomial mono;
      std::function<double(const E&)> g;
    };
    const std::vector<Case> cases = {
        {{1}, [](const E& e) { return e[0]; }},
        {{2}, [](const E& e) { return e[0] * e[0]; }},
        {{1, 1}, [](const E& e) { return e[0] * e[1]; }},
        {{1, 2}, [](const E& e) { return e[0] * e[1] * e[1]; }},
        {{3, 1}, [](const E& e) { return e[0] * e[0] * e[0] * e[1]; }},
        {{2, 2}, [](const E& e) { return e[0] * e[0] * e[1] * e[1]; }},
        {{1, 1, 1, 1}, [](const E& e) { return e[0] * e[1] * e[2] * e[3]; }},
        {{2, 1, 1, 0}, [](const E& e) { return e[0] * e[0] * e[1] * e[2]; }},
        {{4}, [](const E& e) { return std::pow(e[0], 4); }},
    };
    for (const auto& c : cases) {
      CAPTURE(c.mono.to_string());
      CHECK(ssk::nu0_monomial(c.mono, p) == doctest::Approx(oracle::nu0(o, c.g)).epsilon(1e-11));
    }
  }

  TEST_CASE("simple limits: nu0(eps) = r, nu0(eps1 eps2) = q, nu0(eps^2) = 1") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ub(0.0, 0.3), uh(0.0, 0.5);
    for (int i = 0; i < 20; ++i) {
      const auto p = ssk::rs_point(kP2, ub(gen), uh(gen));
      CHECK(ssk::nu0_monomial({1}, p) == doctest::Approx(p.r).epsilon(1e-12));
      CHECK(ssk::nu0_monomial({1, 1}, p) == doctest::Approx(p.q).epsilon(1e-12));
      CHECK(ssk::nu0_monomial({2}, p) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("permuting replicas leaves nu0 unchanged") {
    const auto p = headline();
    CHECK(ssk::nu0_monomial({1, 3}, p) == doctest::Approx(ssk::nu0_monomial({3, 1}, p)).epsilon(1e-14));
    CHECK(ssk::nu0_monomial({2, 1, 1}, p) == doctest::Approx(ssk::nu0_monomial({1, 1, 2}, p)).epsilon(1e-14));
    CHECK(ssk::nu0_monomial({1, 0, 1}, p) == doctest::Approx(ssk::nu0_monomial({1, 1}, p)).epsilon(1e-14));
  }

  TEST_CASE("W and U") {
    const auto p = headline();
    const auto wu = ssk::compute_wu(p);
    const auto o = oracle::fixed_point(0.2, 0.3);
    const double sd = 0.2 * std::sqrt(2 * o.q);
    const double w = oracle::normal_expectation([&](double z) { return std::pow((0.3 + sd * z) / (o.b + 1), 3); });
    const double u = oracle::normal_expectation([&](double z) { return std::pow((0.3 + sd * z) / (o.b + 1), 4); });
    CHECK(wu.w == doctest::Approx(w).epsilon(1e-12));
    CHECK(wu.u == doctest::Approx(u).epsilon(1e-12));
    CHECK(wu.w == doctest::Approx(0.02547070178104161).epsilon(1e-12));
    CHECK(wu.u == doctest::Approx(0.008361887956905812).epsilon(1e-12));
  }

  TEST_CASE("relations table holds at mixed models") {
    for (const char* text : {"p2:1", "p2:1,p3:0.5", "p3:1", "p2:0.5,p4:0.5"}) {
      const auto p = ssk::rs_point(MixturePolynomial::parse(text), 0.25, 0.4);
      const auto rows = ssk::relations_table(p);
      CHECK(rows.size() == 10);
      for (const auto& row : rows) CHECK(std::abs(row.engine - row.closed_form) <= 1e-12);
    }
  }

  TEST_CASE("Y against the limiting cavity law") {
    const auto y = ssk::compute_y(headline());
    const auto expect = oracle::y_values(oracle::fixed_point(0.2, 0.3));
    const std::array<double, 9> frozen = {0.97044994, 0.06406873, 0.00144836, -0.15133757, -0.00173016,
                                          0.21443719, 0.00253616, -0.50928610, -0.00302959};
    for (int j = 0; j < 9; ++j) {
      CAPTURE(j);
      CHECK(std::abs(y[j] - expect[j]) < 1e-11);
      CHECK(std::abs(y[j] - frozen[j]) < 5e-9);
    }
  }

  TEST_CASE("v vector") {
    const auto p = headline();
    const auto v = ssk::compute_v(p);
    const std::array<double, 7> frozen = {0.98277418, 0.0703013, 0.00158926, 0.23530584,
                                          0.0027912, 0.8538897, 0.00507953};
    for (int l = 0; l < 7; ++l) CHECK(std::abs(v[l] - frozen[l]) < 5e-8);
    CHECK(std::abs(v[0] - ssk::v1_from_moments(p)) < 1e-12);
  }

  TEST_CASE("uniform sphere point") {
    const auto p = ssk::rs_point(kP2, 0.0, 0.0);
    const auto v = ssk::compute_v(p);
    const std::array<double, 7> expect = {1, 0, 0, 0, 0, 1, 0};
    for (int l = 0; l < 7; ++l) CHECK(v[l] == doctest::Approx(expect[l]));
  }

  TEST_CASE("eps polynomial algebra") {
    const auto e1 = EpsPolynomial::eps(0), e2 = EpsPolynomial::eps(1);
    const auto sq = (e1 + e2) * (e1 + e2);
    CHECK(sq.terms().size() == 3);
    CHECK(sq.terms().at({1, 1, 0, 0}) == 2.0);
    CHECK((sq - sq).terms().empty());
    CHECK(sq.total_degree() == 2);
    const auto p = headline();
    CHECK(ssk::nu0_polynomial(sq, p) == doctest::Approx(2 + 2 * p.q).epsilon(1e-13));
    CHECK_THROWS_AS(EpsPolynomial::eps(4), ssk::ConfigError);
  }

  TEST_CASE("monomial limits") {
    CHECK_THROWS_AS(ReplicaMonomial({1, 1, 1, 1, 1}), ssk::ConfigError);
    CHECK_THROWS_AS(ReplicaMonomial({5, 4}), ssk::ConfigError);
    CHECK_THROWS_AS(ReplicaMonomial({-1}), ssk::ConfigError);
  }
}
