#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssk {

struct MixtureTerm {
  int degree = 0;
  double weight = 0.0;

  friend bool operator==(const MixtureTerm&, const MixtureTerm&) = default;
};

// Covariance profile xi(x) = sum_p w_p x^p of the Gaussian Hamiltonian,
// E H(s1) H(s2) = N xi(R12). Weights are the squared amplitudes, so the
// disorder sampler scales degree-p couplings by sqrt(w_p).
class MixturePolynomial {
 public:
  static constexpr int kMaxDegree = 8;

  explicit MixturePolynomial(std::vector<MixtureTerm> terms);

  // "p2:1.0,p3:0.25"
  static MixturePolynomial parse(std::string_view text);

  // order-th derivative at x, order in {0,1,2,3}; throws DomainError if |x| > 1.
  double eval(double x, int order = 0) const;

  // x xi'(x) - xi(x)
  double theta(double x) const;

  double at_one() const { return total_weight_; }
  int max_degree() const { return max_degree_; }
  std::span<const MixtureTerm> terms() const { return terms_; }

  std::string to_string() const;

  friend bool operator==(const MixturePolynomial&, const MixturePolynomial&) = default;

 private:
  std::vector<MixtureTerm> terms_;  // sorted by degree
  double total_weight_ = 0.0;
  int max_degree_ = 0;
};

}  // namespace ssk
