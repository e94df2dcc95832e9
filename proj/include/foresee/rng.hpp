#pragma once

#include <cstdint>

namespace foresee {

// Counter-based random stream. The state is a pure function of the seed and
// the identifiers passed at construction, so a stream keyed on
// (seed, particle, step) produces the same draws no matter how work is
// distributed across threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(derive(0x8af1dc1052fe9b21ull, seed)) {}
  RngStream(std::uint64_t seed, std::uint64_t id0)
      : key_(derive(derive(0x8af1dc1052fe9b21ull, seed), id0)) {}
  RngStream(std::uint64_t seed, std::uint64_t id0, std::uint64_t id1)
      : key_(derive(derive(derive(0x8af1dc1052fe9b21ull, seed), id0), id1)) {}
  RngStream(std::uint64_t seed, std::uint64_t id0, std::uint64_t id1, std::uint64_t id2)
      : key_(derive(derive(derive(derive(0x8af1dc1052fe9b21ull, seed), id0), id1), id2)) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Uniform on [0, 1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double next_gaussian();

  // Gamma(shape, scale) via Marsaglia-Tsang squeeze.
  double next_gamma(double shape, double scale);

  // Derives a sub-seed; used to key independent child streams.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t derive(std::uint64_t key, std::uint64_t id) {
    return mix(key ^ (id + 0x9e3779b97f4a7c15ull));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace foresee
