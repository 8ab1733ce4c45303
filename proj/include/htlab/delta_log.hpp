#pragma once

// delta-ring structure on W(F_q)[u]/(u^M) with phi(u) = u^p (M = 1 gives
// W(F_q) itself), delta_log validation for free prelog monoids, and the
// Teichmuller factorization of units.

#include <string>
#include <utility>
#include <vector>

#include "htlab/witt.hpp"

namespace htlab {

class SeriesElem {
 public:
  SeriesElem() = default;
  SeriesElem(const WittRing& ring, int M);  // zero
  static SeriesElem constant(const WittElem& c, int M);
  static SeriesElem u(const WittRing& ring, int M);

  const WittRing& ring() const { return *ring_; }
  int M() const { return static_cast<int>(c_.size()); }
  const WittElem& coeff(int i) const { return c_[i]; }
  WittElem& coeff(int i) { return c_[i]; }
  int precision() const;

  bool is_zero() const;
  bool is_unit() const { return c_[0].is_unit(); }

  SeriesElem operator-() const;
  friend SeriesElem operator+(const SeriesElem& a, const SeriesElem& b);
  friend SeriesElem operator-(const SeriesElem& a, const SeriesElem& b);
  friend SeriesElem operator*(const SeriesElem& a, const SeriesElem& b);
  friend bool operator==(const SeriesElem& a, const SeriesElem& b) { return (a - b).is_zero(); }
  SeriesElem scaled(Int k) const;
  SeriesElem pow(std::uint64_t k) const;
  SeriesElem inverse() const;
  SeriesElem div_p() const;

  std::string to_string() const;

 private:
  const WittRing* ring_ = nullptr;
  std::vector<WittElem> c_;
};

// phi acts by Frobenius on coefficients and u -> u^p.
SeriesElem frobenius(const SeriesElem& x, int k = 1);
// (phi(x) - x^p) / p; loses exactly one digit.
SeriesElem delta(const SeriesElem& x);

struct IdentityReport {
  bool ok = true;
  std::string witness;
};

// Checks delta(xy) = x^p delta(y) + y^p delta(x) + p delta(x) delta(y).
IdentityReport delta_product_rule_check(const std::vector<std::pair<SeriesElem, SeriesElem>>& samples);

struct PrelogCandidate {
  std::vector<std::string> generators;
  std::vector<SeriesElem> alpha;
  std::vector<SeriesElem> deltalog;
};

struct DeltaLogReport {
  bool valid = true;
  // Which axiom failed: "unit", "compatibility", "product" or "frobenius".
  std::string axiom;
  // Exponent vector of the offending monoid element.
  std::vector<int> element;
};

DeltaLogReport delta_log_validate(const PrelogCandidate& c);
// Throws AxiomViolation when the candidate is invalid.
void delta_log_require(const PrelogCandidate& c);

struct Factorization {
  Residue a;
  WittElem teichmuller_part;
  WittElem y;
  // Factors (1 + p phi^{-i}(y))^{p^{i-1}} for i = 1..M; empty when y = 0.
  std::vector<WittElem> factors;
  int verified_precision = 0;
  bool verified = false;
};

// x must be a unit. `requested` defaults to min(N, M + 1).
Factorization teichmuller_factorize(const WittElem& x, int horizon, int requested = -1);

}  // namespace htlab
