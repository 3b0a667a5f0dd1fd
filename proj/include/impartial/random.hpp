#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace impartial {

/// SplitMix64 finalizer applied to (seed, stream): a well-mixed 64-bit seed
/// for an independent generator per replicate.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Portable random source: std::mt19937_64 (fully specified by the standard)
/// plus distribution code written here, since the std distributions are
/// implementation-defined. Gaussian draws use Box-Muller.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(derive_stream_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, n), unbiased.
  std::size_t below(std::size_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace impartial
