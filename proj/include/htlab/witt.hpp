#pragma once

// W(F_q) for q = p^f, truncated at p^N, presented as Z_p[g]/(P(g)) with P a
// monic lift of an irreducible polynomial over F_p. The Frobenius lift sends g
// to the Hensel root of P congruent to g^p.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "htlab/padic.hpp"

namespace htlab {

inline constexpr int kMaxResidueDegree = 4;

class WittElem;

class WittRing {
 public:
  static const WittRing& get(Int p, int f, int precision);

  Int p() const { return p_; }
  int f() const { return f_; }
  int N() const { return n_; }
  Int modulus() const { return pow_p_[n_]; }
  Int pow_p(int k) const { return pow_p_[k]; }
  // Coefficients of P, lowest first, length f+1.
  const std::vector<Int>& defining_polynomial() const { return poly_; }

 private:
  WittRing(Int p, int f, int precision);
  void init_frobenius();

  Int p_;
  int f_;
  int n_;
  std::vector<Int> pow_p_;
  std::vector<Int> poly_;
  // Images phi^k(g) for k = 0..f-1, as coefficient arrays.
  std::vector<std::array<Int, kMaxResidueDegree>> frob_g_;

  friend class WittElem;
  friend WittElem frobenius(const WittElem& x, int k);
};

// Residue field element: coefficients in the basis 1, g, ..., g^{f-1} mod p.
using Residue = std::vector<Int>;

class WittElem {
 public:
  using Coeffs = std::array<Int, kMaxResidueDegree>;

  WittElem() = default;
  static WittElem from_int(const WittRing& ring, Int value);
  static WittElem from_coeffs(const WittRing& ring, std::span<const Int> coeffs);
  static WittElem generator(const WittRing& ring);
  static WittElem zero(const WittRing& ring) { return from_int(ring, 0); }
  static WittElem one(const WittRing& ring) { return from_int(ring, 1); }

  bool valid() const { return ring_ != nullptr; }
  const WittRing& ring() const { return *ring_; }
  int precision() const { return prec_; }
  Int coeff(int i) const { return c_[i]; }
  // Net number of Frobenius twists applied, modulo f.
  int frobenius_power() const { return frob_; }

  bool is_zero() const;
  bool is_unit() const;
  // p-adic valuation (capped at precision).
  int valuation() const;
  Residue residue() const;

  WittElem operator-() const;
  friend WittElem operator+(const WittElem& a, const WittElem& b);
  friend WittElem operator-(const WittElem& a, const WittElem& b);
  friend WittElem operator*(const WittElem& a, const WittElem& b);
  WittElem& operator+=(const WittElem& b) { return *this = *this + b; }
  WittElem& operator-=(const WittElem& b) { return *this = *this - b; }
  WittElem& operator*=(const WittElem& b) { return *this = *this * b; }
  friend bool operator==(const WittElem& a, const WittElem& b) { return (a - b).is_zero(); }

  WittElem pow(std::uint64_t k) const;
  WittElem inverse() const;
  WittElem div_p() const;
  WittElem scaled(Int k) const;
  WittElem with_precision(int precision) const;

  std::string to_string() const;

 private:
  WittElem(const WittRing* ring, const Coeffs& c, int prec, int frob = 0)
      : ring_(ring), c_(c), prec_(prec), frob_(frob) {
    canonicalize();
  }
  void canonicalize();

  const WittRing* ring_ = nullptr;
  Coeffs c_{};
  int prec_ = 0;
  int frob_ = 0;

  friend WittElem frobenius(const WittElem& x, int k);
  friend class WittRing;
};

// phi^k; negative k is reduced modulo f.
WittElem frobenius(const WittElem& x, int k = 1);
// The unique lift of `a` fixed by x -> x^q.
WittElem teichmuller(const WittRing& ring, const Residue& a);
WittElem teichmuller(const WittRing& ring, Int a);

}  // namespace htlab
