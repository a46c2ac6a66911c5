#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

#include "hqrrp/matrix.hpp"

namespace hqrrp {

/// xoshiro256++ (Blackman & Vigna), seeded through splitmix64. The
/// generator is part of the file-level contract: a seed reproduces the same
/// stream on every platform.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Explicit random state: an xoshiro256++ stream plus the spare variate of
/// the Box-Muller pair.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; variates are produced in pairs.
  double normal();

 private:
  Xoshiro256pp engine_;
  std::optional<double> spare_;
};

/// i.i.d. N(0, 1) entries, filled in column-major order.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols);

}  // namespace hqrrp
