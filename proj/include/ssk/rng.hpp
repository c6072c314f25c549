#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ssk::rng {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key of an independent stream, derived from a seed and up to three labels.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
  std::uint64_t k = mix64(seed ^ 0x5353'4b44'6973'6f72ULL);
  k = mix64(k ^ mix64(a + 0x1000));
  k = mix64(k ^ mix64(b + 0x2000));
  return mix64(k ^ mix64(c + 0x3000));
}

// Value number `counter` of stream `key`: a pure function of both.
constexpr std::uint64_t counter_u64(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + counter * 0x9e3779b97f4a7c15ULL);
}

// Uniform on (0, 1), never exactly 0 or 1.
constexpr double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal as a pure function of (key, index): Box-Muller on two
// counter values, cosine branch.
inline double counter_normal(std::uint64_t key, std::uint64_t index) {
  const double u1 = to_open_unit(counter_u64(key, 2 * index));
  const double u2 = to_open_unit(counter_u64(key, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential view of a counter-based stream.
class CounterStream {
 public:
  CounterStream() = default;
  explicit CounterStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return counter_u64(key_, counter_++); }
  double uniform() { return to_open_unit(next_u64()); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ssk::rng
