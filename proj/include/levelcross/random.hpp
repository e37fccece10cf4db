#pragma once

#include <cstdint>
#include <random>

namespace levelcross {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

// Stream tags keep the shuffle, surrogate and baseline draws independent
// even when they share a master seed.
enum class Stream : std::uint32_t {
  Generator = 1,
  Shuffle = 2,
  Surrogate = 3,
  WhiteBaseline = 4,
  SelfTest = 5,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Seed for realization `index` of `stream`; a pure function of its inputs,
// so ensembles do not depend on evaluation order.
inline Seed derive_seed(Seed master, Stream stream, std::uint64_t index = 0) {
  std::uint64_t h = detail::splitmix64(master.value);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = detail::splitmix64(h ^ index);
  return Seed{h};
}

inline std::mt19937_64 make_engine(Seed seed) { return std::mt19937_64(seed.value); }

}  // namespace levelcross
