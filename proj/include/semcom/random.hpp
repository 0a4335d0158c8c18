#pragma once

#include <cstdint>
#include <random>

namespace semcom {

using Rng = std::mt19937_64;

// Independent stream tags. Channel streams use the bare seed ^ user_id.
enum class Stream : std::uint64_t {
  kChannel = 0,
  kContent = 1,
  kOracle = 2,
  kAcquisition = 3,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream of `user_id` tagged `stream` under the run seed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t user_id, Stream stream) {
  if (stream == Stream::kChannel) return seed ^ user_id;
  return mix64(seed ^ mix64(user_id + (static_cast<std::uint64_t>(stream) << 32)));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t user_id, Stream stream) {
  return Rng(stream_seed(seed, user_id, stream));
}

}  // namespace semcom
