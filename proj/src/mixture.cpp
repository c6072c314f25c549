#include "ssk/mixture.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ssk/errors.hpp"

namespace ssk {

MixturePolynomial::MixturePolynomial(std::vector<MixtureTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigError("mixture needs at least one term");
  std::sort(terms_.begin(), terms_.end(),
            [](const MixtureTerm& a, const MixtureTerm& b) { return a.degree < b.degree; });
  bool any_positive = false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (t.degree < 1 || t.degree > kMaxDegree)
      throw ConfigError("mixture degree must lie in [1, 8], got " + std::to_string(t.degree));
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight))
      throw ConfigError("mixture weights must be finite and nonnegative");
    if (i > 0 && terms_[i - 1].degree == t.degree)
      throw ConfigError("duplicate mixture degree " + std::to_string(t.degree));
    any_positive = any_positive || t.weight > 0.0;
    total_weight_ += t.weight;
  }
  if (!any_positive) throw ConfigError("mixture needs at least one positive weight");
  max_degree_ = terms_.back().degree;
}

MixturePolynomial MixturePolynomial::parse(std::string_view text) {
  std::vector<MixtureTerm> terms;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);

    const auto colon = item.find(':');
    if (item.size() < 4 || item.front() != 'p' || colon == std::string_view::npos)
      throw ConfigError("bad mixture term '" + std::string(item) + "', expected p<degree>:<weight>");
    MixtureTerm term;
    const auto deg = item.substr(1, colon - 1);
    auto [p1, e1] = std::from_chars(deg.data(), deg.data() + deg.size(), term.degree);
    if (e1 != std::errc{} || p1 != deg.data() + deg.size())
      throw ConfigError("bad mixture degree in '" + std::string(item) + "'");
    const auto w = item.substr(colon + 1);
    auto [p2, e2] = std::from_chars(w.data(), w.data() + w.size(), term.weight);
    if (e2 != std::errc{} || p2 != w.data() + w.size())
      throw ConfigError("bad mixture weight in '" + std::string(item) + "'");
    terms.push_back(term);
  }
  return MixturePolynomial(std::move(terms));
}

double MixturePolynomial::eval(double x, int order) const {
  if (!(std::abs(x) <= 1.0)) throw DomainError("overlap argument outside [-1, 1]");
  if (order < 0 || order > 3) throw DomainError("derivative order must be 0..3");
  double sum = 0.0;
  for (const auto& t : terms_) {
    const int p = t.degree;
    if (p < order) continue;
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= p - j;
    sum += t.weight * falling * std::pow(x, p - order);
  }
  return sum;
}

double MixturePolynomial::theta(double x) const { return x * eval(x, 1) - eval(x, 0); }

std::string MixturePolynomial::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ',';
    os << 'p' << terms_[i].degree << ':' << terms_[i].weight;
  }
  return os.str();
}

}  // namespace ssk
