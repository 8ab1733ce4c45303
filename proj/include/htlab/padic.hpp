#pragma once

// Truncated arithmetic in O_K = Z_p[u]/(E(u)) and its fraction field K.
//
// Elements of O_K are stored as e coefficients on 1, pi, ..., pi^{e-1}
// reduced modulo p^N, together with an absolute pi-adic precision k: the
// element is known modulo pi^k. The representation is kept canonical
// (coefficient i reduced modulo p^{ceil((k-i)/e)}), so an element is zero at
// its precision exactly when every stored coefficient is zero.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htlab/errors.hpp"

namespace htlab {

using Int = std::int64_t;
using Wide = __int128;

inline constexpr int kMaxRamification = 4;

// Small helpers for Z/p^k arithmetic on signed 64-bit words.
namespace zp {

Int mod(Wide a, Int m);
Int mul(Int a, Int b, Int m);
Int pow(Int a, std::uint64_t e, Int m);
// Inverse of a unit a modulo m = p^k.
Int inverse(Int a, Int p, Int m);
// p-adic valuation of a nonzero integer; returns `cap` for zero.
int valuation(Int a, Int p, int cap);
bool is_prime(Int n);

}  // namespace zp

// Interned description of O_K at a fixed precision. Rings live for the
// lifetime of the process, so elements hold a plain pointer.
class OkRing {
 public:
  // `eisenstein` holds the full coefficient list of E(u), lowest degree
  // first, including the leading 1.
  static const OkRing& get(Int p, std::span<const Int> eisenstein, int precision);

  Int p() const { return p_; }
  int e() const { return e_; }
  int N() const { return n_; }
  int full_precision() const { return e_ * n_; }
  Int modulus() const { return pow_p_[n_]; }
  Int pow_p(int k) const { return pow_p_[k]; }
  const std::vector<Int>& eisenstein() const { return eis_; }

  // Reduction data: pi^e = -(c_0 + c_1 pi + ... + c_{e-1} pi^{e-1}).
  Int reduction(int i) const { return red_[i]; }

 private:
  OkRing(Int p, std::vector<Int> eisenstein, int precision);

  Int p_;
  int e_;
  int n_;
  std::vector<Int> eis_;
  std::vector<Int> pow_p_;
  std::array<Int, kMaxRamification> red_{};

  friend class OkElem;
};

class OkElem {
 public:
  using Coeffs = std::array<Int, kMaxRamification>;

  OkElem() = default;

  static OkElem from_int(const OkRing& ring, Int value);
  static OkElem from_coeffs(const OkRing& ring, std::span<const Int> coeffs);
  static OkElem from_coeffs(const OkRing& ring, std::span<const Int> coeffs, int precision);
  static OkElem zero(const OkRing& ring) { return from_int(ring, 0); }
  static OkElem one(const OkRing& ring) { return from_int(ring, 1); }
  static OkElem pi(const OkRing& ring);

  bool valid() const { return ring_ != nullptr; }
  const OkRing& ring() const { return *ring_; }
  int precision() const { return prec_; }
  Int coeff(int i) const { return c_[i]; }
  const Coeffs& coeffs() const { return c_; }

  // pi-adic valuation, or nullopt when the element is zero at its precision.
  // Throws PrecisionExhausted when no digit is known.
  std::optional<int> valuation() const;
  // Valuation capped at the precision (never throws).
  int valuation_capped() const;
  bool is_zero() const;
  bool is_unit() const;

  OkElem operator-() const;
  friend OkElem operator+(const OkElem& a, const OkElem& b);
  friend OkElem operator-(const OkElem& a, const OkElem& b);
  friend OkElem operator*(const OkElem& a, const OkElem& b);
  OkElem& operator+=(const OkElem& b) { return *this = *this + b; }
  OkElem& operator-=(const OkElem& b) { return *this = *this - b; }
  OkElem& operator*=(const OkElem& b) { return *this = *this * b; }

  // Equality at the smaller of the two precisions.
  friend bool operator==(const OkElem& a, const OkElem& b) { return (a - b).is_zero(); }

  OkElem scaled(Int k) const;
  OkElem inverse() const;
  // Exact division by p; requires valuation >= e. Precision drops by e.
  OkElem div_p() const;
  // Exact division by pi^k; requires valuation >= k. Precision drops by k.
  OkElem div_pi(int k = 1) const;
  // Multiply by p^k; precision rises by e*k, capped at full precision.
  OkElem mul_p(int k) const;
  // Multiply by pi^k; precision rises by k, capped at full precision.
  OkElem mul_pi(int k) const;
  OkElem with_precision(int precision) const;

  std::string to_string() const;

 private:
  OkElem(const OkRing* ring, const Coeffs& c, int prec) : ring_(ring), c_(c), prec_(prec) {
    canonicalize();
  }
  void canonicalize();

  const OkRing* ring_ = nullptr;
  Coeffs c_{};
  int prec_ = 0;
};

// Element p^{-shift} * unit_part of K. When shift > 0 the unit part is not
// divisible by p (whenever its precision allows deciding this).
class KElem {
 public:
  KElem() = default;
  explicit KElem(OkElem integral) : unit_(std::move(integral)) {}
  KElem(OkElem unit_part, int p_shift);

  static KElem from_int(const OkRing& ring, Int value) { return KElem(OkElem::from_int(ring, value)); }
  // num / den with den != 0 an ordinary integer.
  static KElem from_rational(const OkRing& ring, Int num, Int den);
  static KElem zero(const OkRing& ring) { return from_int(ring, 0); }
  static KElem one(const OkRing& ring) { return from_int(ring, 1); }

  bool valid() const { return unit_.valid(); }
  const OkRing& ring() const { return unit_.ring(); }
  const OkElem& unit_part() const { return unit_; }
  int shift() const { return shift_; }
  // Absolute pi-adic precision of the value (may be negative).
  int precision() const { return unit_.precision() - ring().e() * shift_; }

  std::optional<int> valuation() const;
  bool is_zero() const { return unit_.is_zero(); }
  bool is_integral() const;
  OkElem to_ok() const;

  KElem operator-() const { return KElem(-unit_, shift_); }
  friend KElem operator+(const KElem& a, const KElem& b);
  friend KElem operator-(const KElem& a, const KElem& b) { return a + (-b); }
  friend KElem operator*(const KElem& a, const KElem& b);
  friend KElem operator/(const KElem& a, const KElem& b) { return a * b.inverse(); }
  KElem& operator+=(const KElem& b) { return *this = *this + b; }
  KElem& operator-=(const KElem& b) { return *this = *this - b; }
  KElem& operator*=(const KElem& b) { return *this = *this * b; }
  friend bool operator==(const KElem& a, const KElem& b) { return (a - b).is_zero(); }

  KElem scaled(Int k) const { return KElem(unit_.scaled(k), shift_); }
  // Division by a nonzero ordinary integer.
  KElem divided(Int k) const;
  KElem inverse() const;
  // Forget digits beyond absolute pi-adic precision k.
  KElem with_abs_precision(int k) const;
  // Valuation capped at the precision (never throws).
  int valuation_capped() const { return unit_.valuation_capped() - ring().e() * shift_; }

  std::string to_string() const;

 private:
  void normalize();

  OkElem unit_;
  int shift_ = 0;
};

}  // namespace htlab
