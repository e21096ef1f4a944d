#include "qfluct/random.hpp"

namespace qfluct {

RandomStream derive_stream(std::uint64_t masterSeed, std::uint64_t index) {
  // Two rounds keep nearby (seed, index) pairs from producing related keys.
  const std::uint64_t k = mix64(masterSeed ^ 0x6a09e667f3bcc909ULL);
  return RandomStream(mix64(k + mix64(index + 0x3c6ef372fe94f82bULL)));
}

}  // namespace qfluct
