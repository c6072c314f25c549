#include "ssk/disorder.hpp"

#include <cmath>
#include <numeric>

#include "ssk/errors.hpp"
#include "ssk/rng.hpp"

namespace ssk {

DisorderSample sample_disorder(const MixturePolynomial& mixture, int n, std::uint64_t seed,
                               Execution exec) {
  if (n < 4) throw ConfigError("disorder needs N >= 4");
  double entries = 0.0;
  for (const auto& t : mixture.terms()) entries += std::pow(static_cast<double>(n), t.degree);
  if (entries > kTensorBudget)
    throw ConfigError("coupling tensors exceed the memory budget of 2e8 entries");
  if (mixture.max_degree() >= 3 && n > kMaxNForCubic)
    throw ConfigError("N is capped at 200 when the mixture has a term of degree >= 3");

  DisorderSample sample{n, seed, {}};
  for (const auto& t : mixture.terms()) {
    CouplingTensor tensor{t.degree, t.weight, {}};
    std::size_t size = 1;
    for (int i = 0; i < t.degree; ++i) size *= static_cast<std::size_t>(n);
    tensor.g.resize(size);
    const std::uint64_t key = rng::derive_key(seed, static_cast<std::uint64_t>(t.degree));
    const auto count = static_cast<long long>(size);
    double* out = tensor.g.data();
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < count; ++i) out[i] = rng::counter_normal(key, i);
    } else {
      for (long long i = 0; i < count; ++i) out[i] = rng::counter_normal(key, i);
    }
    sample.tensors.push_back(std::move(tensor));
  }
  return sample;
}

double contract(const CouplingTensor& tensor, std::span<const double> sigma) {
  const std::size_t n = sigma.size();
  // contract the last index repeatedly
  std::vector<double> cur(tensor.g.size() / n);
  for (std::size_t k = 0; k < cur.size(); ++k)
    cur[k] = std::inner_product(sigma.begin(), sigma.end(), tensor.g.begin() + k * n, 0.0);
  while (cur.size() > 1) {
    std::vector<double> next(cur.size() / n);
    for (std::size_t k = 0; k < next.size(); ++k)
      next[k] = std::inner_product(sigma.begin(), sigma.end(), cur.begin() + k * n, 0.0);
    cur = std::move(next);
  }
  return cur[0];
}

double hamiltonian(const DisorderSample& disorder, std::span<const double> sigma) {
  if (static_cast<int>(sigma.size()) != disorder.n) throw ConfigError("configuration length != N");
  double total = 0.0;
  for (const auto& t : disorder.tensors) {
    if (t.weight == 0.0) continue;
    const double scale = std::sqrt(t.weight) * std::pow(static_cast<double>(disorder.n), 0.5 * (1 - t.degree));
    total += scale * contract(t, sigma);
  }
  return total;
}

double energy(const DisorderSample& disorder, std::span<const double> sigma, double beta, double h) {
  const double field = h * std::accumulate(sigma.begin(), sigma.end(), 0.0);
  return beta == 0.0 ? field : beta * hamiltonian(disorder, sigma) + field;
}

}  // namespace ssk
