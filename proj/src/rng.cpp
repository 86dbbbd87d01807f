#include "monosindex/rng.hpp"

namespace monosindex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id) {
  return splitmix64(splitmix64(seed) ^ (id * 0xd1b54a32d192ed03ULL));
}

Rng make_stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix_seed(seed, id)),
                    static_cast<std::uint32_t>(mix_seed(seed, id) >> 32),
                    static_cast<std::uint32_t>(id)};
  return Rng(seq);
}

}  // namespace monosindex
