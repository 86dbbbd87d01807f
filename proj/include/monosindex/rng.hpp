#pragma once

#include <cstdint>
#include <random>

namespace monosindex {

/// The generator used everywhere. mt19937_64 is specified bit-for-bit by the
/// standard, so streams are reproducible across builds.
using Rng = std::mt19937_64;

/// Purpose tags for substreams derived from a single user seed.
enum class Stream : std::uint64_t {
  covariates = 1,
  noise = 2,
  starts = 3,
  replication = 4,
  monte_carlo = 5,
};

/// SplitMix64 finalizer applied to (seed, id); used to derive child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id);

/// Generator for substream `id` of `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t id);

inline Rng make_stream(std::uint64_t seed, Stream id) {
  return make_stream(seed, static_cast<std::uint64_t>(id));
}

}  // namespace monosindex
