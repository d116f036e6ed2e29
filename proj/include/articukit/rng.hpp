#pragma once

#include "articukit/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

// Thin wrappers around std::mt19937_64 that pin the exact draw sequence.
// The standard library's distribution objects are allowed to differ between
// implementations; these helpers are not, which keeps seeded artifacts
// byte-identical everywhere.
namespace articukit::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Decorrelated per-stream seed derived from a root seed.
inline std::uint64_t child_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t s = root ^ (0x2545f4914f6cdd1dull * (stream + 1));
  return splitmix64(s);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Uniform integer in [0, n). n = 0 is the caller's bug.
inline std::size_t index(std::mt19937_64& g, std::size_t n) {
  std::size_t i = static_cast<std::size_t>(uniform01(g) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

// Standard normal via Box-Muller; consumes exactly two draws.
inline double normal(std::mt19937_64& g) {
  double u1 = 1.0 - uniform01(g);  // (0, 1]
  double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Vec3 gaussian3(std::mt19937_64& g, double sigma) {
  return Vec3(sigma * normal(g), sigma * normal(g), sigma * normal(g));
}

// Uniform direction on the unit sphere.
inline Vec3 unit_vector(std::mt19937_64& g) {
  double z = uniform(g, -1.0, 1.0);
  double phi = uniform(g, 0.0, 2.0 * M_PI);
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

// Deterministic orthonormal pair completing u to a right-handed frame.
inline void perpendicular_basis(const Vec3& u, Vec3& e1, Vec3& e2) {
  Vec3 ref = std::abs(u.x()) <= std::abs(u.y())
                 ? (std::abs(u.x()) <= std::abs(u.z()) ? Vec3(1, 0, 0) : Vec3(0, 0, 1))
                 : (std::abs(u.y()) <= std::abs(u.z()) ? Vec3(0, 1, 0) : Vec3(0, 0, 1));
  e1 = u.cross(ref).normalized();
  e2 = u.cross(e1).normalized();
}

}  // namespace articukit::rng
