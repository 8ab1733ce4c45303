#pragma once

// The chart ring R = O_K<T_0, ..., T_r, T_{r+1}^{+-1}, ..., T_d^{+-1}> / (T_0...T_r - pi)
// with coefficients in K, truncated at a total degree. The point mode (R = O_K)
// has no variables. Every scalar in Higgs data, pd rings and formal series
// is a ChartElem.

#include <array>
#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "htlab/padic.hpp"

namespace htlab {

inline constexpr int kMaxChartVars = 8;

using Mono = std::array<std::int8_t, kMaxChartVars>;

class ChartCtx {
 public:
  // d = 0 selects the point mode.
  static const ChartCtx& get(const OkRing& ring, int d, int r, int degree_cutoff);
  static const ChartCtx& point(const OkRing& ring) { return get(ring, 0, 0, 0); }

  const OkRing& ring() const { return *ring_; }
  bool is_point() const { return d_ == 0; }
  int d() const { return d_; }
  int r() const { return r_; }
  int cutoff() const { return cutoff_; }
  int num_vars() const { return is_point() ? 0 : d_ + 1; }
  int degree(const Mono& m) const;

 private:
  ChartCtx(const OkRing* ring, int d, int r, int cutoff) : ring_(ring), d_(d), r_(r), cutoff_(cutoff) {}
  const OkRing* ring_;
  int d_, r_, cutoff_;
};

class ChartElem {
 public:
  struct Term {
    Mono mono;
    KElem coeff;
  };

  ChartElem() = default;
  explicit ChartElem(const ChartCtx& ctx);  // zero
  ChartElem(const ChartCtx& ctx, const KElem& c);
  ChartElem(const ChartCtx& ctx, Int c) : ChartElem(ctx, KElem::from_int(ctx.ring(), c)) {}
  // Single monomial c * T^mono (normalized and truncated).
  static ChartElem monomial(const ChartCtx& ctx, const Mono& mono, const KElem& c);
  static ChartElem variable(const ChartCtx& ctx, int i);

  bool valid() const { return ctx_ != nullptr; }
  const ChartCtx& ctx() const { return *ctx_; }
  const OkRing& ring() const { return ctx_->ring(); }
  // Terms sorted by monomial; the constant term is always present first.
  const std::vector<Term>& terms() const { return terms_; }
  const KElem& constant() const { return terms_.front().coeff; }
  bool truncated() const { return truncated_; }
  bool is_constant() const { return terms_.size() == 1; }

  bool is_zero() const;
  // Zero and known to the full precision of the ring.
  bool is_exact_zero() const { return is_zero() && precision() >= ring().full_precision(); }
  bool is_integral() const;
  // Smallest valuation of a nonzero coefficient, nullopt for zero.
  std::optional<int> valuation() const;
  // Smallest capped valuation over all terms (used for precision bounds).
  int low_valuation() const;
  // Smallest absolute precision over all terms.
  int precision() const;

  ChartElem operator-() const;
  friend ChartElem operator+(const ChartElem& a, const ChartElem& b);
  friend ChartElem operator-(const ChartElem& a, const ChartElem& b);
  friend ChartElem operator*(const ChartElem& a, const ChartElem& b);
  ChartElem& operator+=(const ChartElem& b);
  ChartElem& operator-=(const ChartElem& b) { return *this = *this - b; }
  ChartElem& operator*=(const ChartElem& b) { return *this = *this * b; }
  friend bool operator==(const ChartElem& a, const ChartElem& b) { return (a - b).is_zero(); }

  ChartElem scaled(Int k) const;
  ChartElem divided(Int k) const;
  ChartElem times(const KElem& k) const;
  ChartElem with_abs_precision(int k) const;

  std::string to_string() const;

 private:
  void apply_floor();

  const ChartCtx* ctx_ = nullptr;
  std::vector<Term> terms_;
  // Absolute precision bound inherited from terms that cancelled away.
  int floor_ = INT_MAX;
  bool truncated_ = false;
};

}  // namespace htlab
