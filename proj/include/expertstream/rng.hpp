#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expertstream {

// Root seed for an experiment. Every random decision in a run is drawn from a
// stream derived from (seed, label path), so equal seeds replay bit-identically.
struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

namespace detail {

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// splitmix64 finalizer; bijective on u64.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic PRNG stream on top of mt19937_64 (exactly specified by the
// standard, so sequences match across platforms). Distribution helpers are
// implemented here instead of <random>'s distribution templates because those
// are implementation-defined and would break replay across standard libraries.
class Rng {
 public:
  explicit Rng(Seed seed)
      : root_(seed.value), engine_(detail::mix64(seed.value ^ kEngineSalt)) {}

  Rng(Seed seed, std::string_view label) : Rng(derive(seed, label)) {}

  // Label-derived child seed. Non-commutative in the label path.
  static Seed derive(Seed seed, std::string_view label) {
    return Seed{detail::mix64(detail::mix64(seed.value) ^ detail::fnv1a64(label))};
  }

  // Child stream keyed off this stream's own seed, independent of how many
  // draws were already consumed here.
  Rng substream(std::string_view label) const { return Rng(Seed{root_}, label); }

  Rng substream(std::string_view label, std::uint64_t index) const {
    std::string full(label);
    full += '/';
    full += std::to_string(index);
    return substream(full);
  }

  Seed seed() const { return Seed{root_}; }

  std::uint64_t next() { return engine_(); }

  // Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // 53-bit uniform in [0, 1). Consumes exactly one engine draw.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Consumes exactly one engine draw regardless of p.
  bool bernoulli(double p) { return uniform01() < p; }

  // k distinct indices from [0, n), returned in ascending order.
  std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k exceeds n");
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  }

 private:
  static constexpr std::uint64_t kEngineSalt = 0x6a09e667f3bcc909ull;

  std::uint64_t root_;
  std::mt19937_64 engine_;
};

}  // namespace expertstream
