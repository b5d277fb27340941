#pragma once

#include <cstdint>

namespace cosarc {

/// Pipeline stages that own an independent random stream within a repetition.
enum class Stage : std::uint64_t {
  generate_train = 1,
  generate_calibration = 2,
  generate_test = 3,
  split = 4,
  impute = 5,
  km_decensor = 6,
  simulate = 7,
};

/// Counter-based generator: the n-th output is a pure function of (key, n).
///
/// Streams are never advanced from more than one thread. Independent work
/// items get their own stream through substream(label), which derives a new
/// key and leaves the parent untouched, so results do not depend on the
/// order in which items are processed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal by inversion.
  double normal();
  double exponential(double rate);

  RandomStream substream(std::uint64_t label) const;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed contract for the Monte Carlo harness: (root, repetition, stage)
/// always maps to the same stream.
struct SeedSpec {
  std::uint64_t root_seed = 0;
  std::uint64_t repetition = 0;
  Stage stage = Stage::simulate;

  RandomStream stream() const;
};

std::uint64_t mix64(std::uint64_t value);

}  // namespace cosarc
