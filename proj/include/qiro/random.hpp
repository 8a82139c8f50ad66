#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace qiro {

// All randomness in the library flows through std::mt19937_64. Its output
// sequence is fixed by the C++ standard, so identical seeds reproduce
// identical instances and runs on every conforming platform. The standard
// distributions are NOT portable, so the helpers below draw from the raw
// engine output directly.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over bytes, for folding names into seeds.
constexpr std::uint64_t hash_name(std::string_view s) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Order-sensitive combination of seed components.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept
{
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi)
{
  return lo + (hi - lo) * uniform_real(rng);
}

/// Uniform integer in [0, n), unbiased by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
  const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} - n + 1) % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r < limit);
  return r % n;
}

inline bool bernoulli(Rng& rng, double p)
{
  return uniform_real(rng) < p;
}

/// Fisher-Yates with the portable index draw.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng)
{
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

} // namespace qiro
