#pragma once

#include "masep/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>

namespace masep {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key; the 128-bit counter is split into a 64-bit
/// block counter (low words) and a 64-bit stream id (high words), so
/// replica r of seed s reads the disjoint stream (s, r). Satisfies
/// UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::string_view kName = "philox4x32-10";

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0);

  /// The raw bijection: 10 rounds over `counter` under `key`.
  static Block generate(Block counter, Key key);

  result_type operator()();
  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  Key key_;
  std::uint64_t block_ = 0;
  std::uint64_t stream_;
  Block buffer_{};
  int used_ = 4;
};

/// Reproducible source of rational spectral sample points. Each point is
/// p/d with 1 <= p, d <= kMaxTerm, never 1. A point rejected by the caller
/// (pole, singular operator) is redrawn, at most kMaxAttempts times.
class SamplePointGenerator {
 public:
  static constexpr int kMaxTerm = 97;
  static constexpr int kMaxAttempts = 100;

  explicit SamplePointGenerator(std::uint64_t seed) : rng_(seed, 0x5a3) {}

  Rat next();

  /// Number of points discarded so far through redraw().
  int redraws() const { return redraws_; }
  void note_redraw() { ++redraws_; }

 private:
  Philox4x32 rng_;
  int redraws_ = 0;
};

}  // namespace masep
