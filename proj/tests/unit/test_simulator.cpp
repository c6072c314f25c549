#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ssk/disorder.hpp"
#include "ssk/errors.hpp"
#include "ssk/report.hpp"
#include "ssk/rng.hpp"
#include "ssk/rs_solver.hpp"
#include "ssk/simulator.hpp"

using ssk::MixturePolynomial;

namespace {

Eigen::VectorXd random_sphere_point(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = nd(gen);
  return x * (std::sqrt(double(n)) / x.norm());
}

ssk::ExperimentConfig small_config() {
  ssk::ExperimentConfig c;
  c.n = 30;
  c.n_disorder = 3;
  c.n_chains = 4;
  c.sweeps = 2000;
  c.burnin = 500;
  c.batches = 10;
  return c;
}

bool same(const ssk::ExperimentResult& a, const ssk::ExperimentResult& b) {
  for (int o = 0; o < ssk::kObservableCount; ++o) {
    if (a.estimates[o].mean != b.estimates[o].mean) return false;
    if (a.estimates[o].std_error != b.estimates[o].std_error) return false;
  }
  return a.mean_acceptance == b.mean_acceptance && a.rhat_max == b.rhat_max;
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("streams are pure functions of key and counter") {
    const auto key = ssk::rng::derive_key(12345, 1, 2, 3);
    CHECK(key == ssk::rng::derive_key(12345, 1, 2, 3));
    CHECK(key != ssk::rng::derive_key(12345, 1, 3, 2));
    CHECK(ssk::rng::counter_normal(key, 17) == ssk::rng::counter_normal(key, 17));
    ssk::rng::CounterStream a(key), b(key);
    for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  }

  TEST_CASE("uniform and normal moments") {
    ssk::rng::CounterStream s(ssk::rng::derive_key(1, 2));
    const int count = 200000;
    double u1 = 0, n1 = 0, n2 = 0, n4 = 0;
    for (int i = 0; i < count; ++i) {
      const double u = s.uniform();
      CHECK_UNARY(u > 0.0);
      CHECK_UNARY(u < 1.0);
      u1 += u;
      const double z = s.normal();
      n1 += z;
      n2 += z * z;
      n4 += z * z * z * z;
    }
    CHECK(std::abs(u1 / count - 0.5) < 5 * std::sqrt(1.0 / 12 / count));
    CHECK(std::abs(n1 / count) < 5 / std::sqrt(double(count)));
    CHECK(std::abs(n2 / count - 1) < 5 * std::sqrt(2.0 / count));
    CHECK(std::abs(n4 / count - 3) < 5 * std::sqrt(96.0 / count));
  }
}

TEST_SUITE("disorder") {
  TEST_CASE("serial and parallel fills agree") {
    const auto xi = MixturePolynomial::parse("p2:1,p3:0.5");
    const auto s = ssk::sample_disorder(xi, 20, 99, ssk::Execution::serial);
    const auto p = ssk::sample_disorder(xi, 20, 99, ssk::Execution::parallel);
    REQUIRE(s.tensors.size() == 2);
    CHECK(s.tensors[1].g.size() == 8000);
    for (std::size_t t = 0; t < 2; ++t) CHECK(s.tensors[t].g == p.tensors[t].g);
    CHECK(ssk::sample_disorder(xi, 20, 100).tensors[0].g != s.tensors[0].g);
  }

  TEST_CASE("Hamiltonian covariance is N xi(R12)") {
    const auto xi = MixturePolynomial::parse("p2:1,p3:0.5");
    const int n = 8;
    std::mt19937_64 gen(5);
    const auto x = random_sphere_point(n, gen);
    const auto y = random_sphere_point(n, gen);
    const double r12 = x.dot(y) / n;
    const int samples = 20000;
    double hxx = 0, hxy = 0;
    for (int s = 0; s < samples; ++s) {
      const auto d = ssk::sample_disorder(xi, n, s, ssk::Execution::serial);
      const double hx = ssk::hamiltonian(d, {x.data(), std::size_t(n)});
      const double hy = ssk::hamiltonian(d, {y.data(), std::size_t(n)});
      hxx += hx * hx;
      hxy += hx * hy;
    }
    const double var = n * xi.eval(1.0);
    CHECK(std::abs(hxx / samples - var) < 5 * var * std::sqrt(2.0 / samples));
    CHECK(std::abs(hxy / samples - n * xi.eval(r12)) < 5 * var * std::sqrt(2.0 / samples));
  }

  TEST_CASE("size limits") {
    CHECK_THROWS_AS(ssk::sample_disorder(MixturePolynomial::parse("p3:1"), 300, 1), ssk::ConfigError);
  }
}

TEST_SUITE("simulator") {
  TEST_CASE("working-basis energy equals the full-tensor energy") {
    for (const char* text : {"p2:1", "p2:1,p3:0.5", "p1:0.3,p2:1,p4:0.2"}) {
      const int n = 16;
      const auto d = ssk::sample_disorder(MixturePolynomial::parse(text), n, 4);
      const ssk::WorkingModel model(d, 0.3, 0.2);
      std::mt19937_64 gen(8);
      for (int i = 0; i < 5; ++i) {
        const auto y = random_sphere_point(n, gen);
        const auto sigma = model.to_original(y);
        CHECK(sigma.norm() == doctest::Approx(y.norm()).epsilon(1e-13));
        const double direct = ssk::energy(d, {sigma.data(), std::size_t(n)}, 0.3, 0.2);
        CHECK(model.energy(y) == doctest::Approx(direct).epsilon(1e-11));
        CHECK(model.reference_energy(y) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(model.magnetization(y) == doctest::Approx(sigma.sum() / n).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("chains stay on the sphere with small energy drift") {
    const auto d = ssk::sample_disorder(MixturePolynomial::parse("p2:1,p3:0.3"), 24, 6);
    const ssk::WorkingModel model(d, 0.4, 0.3);
    auto chain = ssk::init_chain(model, 77);
    for (int s = 0; s < 5000; ++s) ssk::mcmc_step(model, chain);
    CHECK(chain.y.squaredNorm() == doctest::Approx(24.0).epsilon(1e-10));
    CHECK(chain.max_energy_drift < 1e-9);
    CHECK(chain.energy == doctest::Approx(model.reference_energy(chain.y)).epsilon(1e-9));
    CHECK(chain.accepted > 0);
    CHECK(chain.accepted < chain.proposed);
  }

  TEST_CASE("deterministic, and serial equals parallel") {
    const auto c = small_config();
    const auto a = ssk::run_experiment(c, ssk::Execution::serial);
    const auto b = ssk::run_experiment(c, ssk::Execution::parallel);
    const auto again = ssk::run_experiment(c, ssk::Execution::parallel);
    CHECK(same(a, b));
    CHECK(same(b, again));
    auto other = c;
    other.seed = 54321;
    CHECK_FALSE(same(a, ssk::run_experiment(other)));
  }

  TEST_CASE("uniform sphere at beta = h = 0") {
    auto c = small_config();
    c.beta = 0.0;
    c.h = 0.0;
    c.n = 50;
    c.n_disorder = 4;
    c.sweeps = 20000;
    const auto res = ssk::run_experiment(c);
    const auto& f1 = res.estimates[ssk::kF1];
    const auto& f6 = res.estimates[ssk::kF6];
    CHECK(std::abs(f1.mean - 1.0) < 4 * f1.std_error);
    CHECK(std::abs(f6.mean - 1.0) < 4 * f6.std_error);
    // flat energy: every proposal is accepted and the step grows to its cap
    CHECK(res.mean_acceptance == 1.0);
    CHECK(res.per_disorder[0].step == ssk::kMaxStep);
    CHECK(res.q == 0.0);
    CHECK(res.tail_threshold == doctest::Approx(2 * std::pow(std::log(50.0) / 50, 0.25)));
  }

  TEST_CASE("sample dump round trip") {
    auto c = small_config();
    c.dump_every = 500;
    c.dump_path = (std::filesystem::temp_directory_path() / "ssk_unit_dump.bin").string();
    const auto res = ssk::run_experiment(c);
    const auto dump = ssk::read_sample_dump(c.dump_path);
    CHECK(dump.version == 1);
    CHECK(dump.n == 30);
    CHECK(dump.count == 3 * 4 * (2000 / 500));
    CHECK(dump.values.size() == dump.count * 30);
    std::size_t offset = 0;
    for (const auto& row : res.per_disorder) {
      for (double v : row.dump) CHECK(dump.values[offset++] == v);
    }
    for (std::uint64_t k = 0; k < dump.count; ++k) {
      double sq = 0;
      for (int i = 0; i < 30; ++i) sq += dump.values[k * 30 + i] * dump.values[k * 30 + i];
      CHECK(sq == doctest::Approx(30.0).epsilon(1e-9));
    }
    std::ifstream raw(c.dump_path, std::ios::binary);
    char magic[4];
    raw.read(magic, 4);
    CHECK(std::string(magic, 4) == "SSKD");
    std::filesystem::remove(c.dump_path);
  }

  TEST_CASE("config validation") {
    auto c = small_config();
    c.n_chains = 3;
    CHECK_THROWS_AS(ssk::validate(c), ssk::ConfigError);
    c = small_config();
    c.n = 2;
    CHECK_THROWS_AS(ssk::validate(c), ssk::ConfigError);
    c = small_config();
    c.sweeps = 10;
    CHECK_THROWS_AS(ssk::validate(c), ssk::ConfigError);
  }
}

TEST_SUITE("report") {
  TEST_CASE("config JSON round trip") {
    auto c = small_config();
    c.mixture = MixturePolynomial::parse("p2:1,p3:0.25");
    c.seed = 0xFFFFFFFFFFFFFFFFULL;
    const auto j = ssk::to_json(c);
    const auto back = ssk::experiment_config_from_json(j);
    CHECK(ssk::to_json(back).dump() == j.dump());
    CHECK(back.seed == c.seed);
    const auto text = ssk::mixture_from_json(ssk::Json("p2:1.0"));
    CHECK(text == MixturePolynomial::parse("p2:1"));
  }
}
