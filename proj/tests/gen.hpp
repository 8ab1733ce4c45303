#pragma once

// Seeded random generators shared by the test binaries.

#include <random>
#include <vector>

#include "htlab/config.hpp"
#include "htlab/padic.hpp"
#include "htlab/witt.hpp"

namespace testgen {

using namespace htlab;

inline Int uniform(std::mt19937_64& rng, Int lo, Int hi) {
  return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

inline OkElem random_ok(std::mt19937_64& rng, const OkRing& ring) {
  std::vector<Int> c(ring.e());
  for (auto& x : c) x = uniform(rng, 0, ring.modulus() - 1);
  return OkElem::from_coeffs(ring, c);
}

inline OkElem random_ok_unit(std::mt19937_64& rng, const OkRing& ring) {
  for (;;) {
    OkElem x = random_ok(rng, ring);
    if (x.is_unit()) return x;
  }
}

inline WittElem random_witt(std::mt19937_64& rng, const WittRing& ring) {
  std::vector<Int> c(ring.f());
  for (auto& x : c) x = uniform(rng, 0, ring.modulus() - 1);
  return WittElem::from_coeffs(ring, c);
}

inline WittElem random_witt_unit(std::mt19937_64& rng, const WittRing& ring) {
  for (;;) {
    WittElem x = random_witt(rng, ring);
    if (x.is_unit()) return x;
  }
}

// A few Eisenstein polynomials per prime, full coefficient lists.
inline std::vector<std::vector<Int>> eisenstein_choices(Int p) {
  std::vector<std::vector<Int>> out = {{-p, 1}, {-p, 0, 1}};
  out.push_back({p, p, 1});
  return out;
}

}  // namespace testgen
