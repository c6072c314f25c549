#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssk/cavity1d.hpp"  // Execution
#include "ssk/mixture.hpp"

namespace ssk {

// i.i.d. standard Gaussian couplings g_{i1..ip}, row-major over {0..N-1}^p.
struct CouplingTensor {
  int degree = 0;
  double weight = 0.0;
  std::vector<double> g;
};

struct DisorderSample {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<CouplingTensor> tensors;  // one per mixture term
};

inline constexpr double kTensorBudget = 2e8;  // total tensor entries
inline constexpr int kMaxNForCubic = 200;     // any degree >= 3 present

// Entry (p, i1..ip) is a pure function of (seed, p, flat index), so the
// serial and parallel fills agree bit for bit.
DisorderSample sample_disorder(const MixturePolynomial& mixture, int n, std::uint64_t seed,
                               Execution exec = Execution::parallel);

// sum_{i1..ip} g_{i1..ip} s_{i1} ... s_{ip}
double contract(const CouplingTensor& tensor, std::span<const double> sigma);

// H_N(s) = sum_p sqrt(w_p) N^((1-p)/2) contract(g_p, s)
double hamiltonian(const DisorderSample& disorder, std::span<const double> sigma);

// beta H_N(s) + h sum_i s_i
double energy(const DisorderSample& disorder, std::span<const double> sigma, double beta, double h);

}  // namespace ssk
