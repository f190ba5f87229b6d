#ifndef WCONT_RNG_HPP
#define WCONT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string_view>
#include <vector>

namespace wcont {

/// SplitMix64 step: advances `state` by the golden-ratio increment and returns
/// the finalized output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a.
class Fnv1a {
 public:
  void add_bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001B3ULL;
    }
  }
  void add(std::uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    add_bytes(bytes, 8);
  }
  void add(double v) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    std::memcpy(&bits, &v, sizeof v);
    add(bits);
  }
  void add(std::string_view s) { add_bytes(s.data(), s.size()); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

/// Seed of trial `index` for a run: start a SplitMix64 state at
/// seed ^ FNV-1a(family), skip `index` outputs, and take the next one.
/// Equivalently the state is advanced by (index + 1) increments.
inline std::uint64_t trial_seed(std::uint64_t seed, std::string_view family, std::uint64_t index) {
  Fnv1a tag;
  tag.add(family);
  std::uint64_t state = (seed ^ tag.value()) + index * 0x9E3779B97F4A7C15ULL;
  return splitmix64(state);
}

/// mt19937_64 with portable conversions: doubles are (x >> 11) * 2^-53 and all
/// derived draws are built from those doubles only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }
  /// Flat Dirichlet sample: normalized -ln(1 - u) draws.
  std::vector<double> dirichlet(std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& v : w) {
      v = -std::log1p(-uniform());
      total += v;
    }
    if (!(total > 0.0)) {
      w.assign(k, 1.0 / static_cast<double>(k));
      return w;
    }
    for (auto& v : w) v /= total;
    return w;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wcont

#endif  // WCONT_RNG_HPP
