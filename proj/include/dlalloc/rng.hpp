#ifndef DLALLOC_RNG_HPP_
#define DLALLOC_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>

namespace dlalloc {

// Seeded random source with platform-independent draws. The standard
// distributions are implementation-defined, so the mapping from engine
// output to values is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  // Independent child stream, derived deterministically from this one.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

  std::string serialize() const;
  void deserialize(const std::string& text);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dlalloc

#endif  // DLALLOC_RNG_HPP_
