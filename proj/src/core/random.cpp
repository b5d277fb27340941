#include "cosarc/random.hpp"

#include <cmath>

#include "cosarc/normal.hpp"

namespace cosarc {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kLabelSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
  // 53 random bits centred in their cell: never exactly 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_quantile(uniform()); }

double RandomStream::exponential(double rate) { return -std::log(uniform()) / rate; }

RandomStream RandomStream::substream(std::uint64_t label) const {
  return RandomStream(mix64(key_ ^ mix64(label * kLabelSalt + kGolden)));
}

RandomStream SeedSpec::stream() const {
  const std::uint64_t rep_key = mix64(mix64(root_seed) + repetition * kGolden);
  return RandomStream(rep_key).substream(static_cast<std::uint64_t>(stage));
}

}  // namespace cosarc
