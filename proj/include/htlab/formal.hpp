#pragma once

// The formal model K[[t]]/(t^T) of the period scalar t, the group
// Gamma = Gamma_geo x| G_K presented by triples (n, c, chi), and the action of
// group elements on t.

#include <string>
#include <vector>

#include "htlab/chart.hpp"
#include "htlab/matrix.hpp"

namespace htlab {

// sigma = gamma^n g with c = c(g), chi = chi(g); all entries are Z_p scalars
// stored as residues modulo p^N.
struct GroupElt {
  std::vector<Int> n;
  Int c = 0;
  Int chi = 1;
};

GroupElt group_identity(int d);
// (n, c, chi) . (m, c', chi') = (n + chi m, c + chi c', chi chi').
GroupElt group_compose(const GroupElt& s, const GroupElt& u, Int modulus);
bool group_equal(const GroupElt& a, const GroupElt& b, Int modulus);

class FormalC {
 public:
  FormalC() = default;
  FormalC(const ChartCtx& ctx, int order);  // zero
  static FormalC constant(const ChartElem& c, int order);
  // c * t^k
  static FormalC monomial(const ChartElem& c, int k, int order);

  int order() const { return static_cast<int>(c_.size()); }
  const ChartCtx& ctx() const { return *ctx_; }
  const ChartElem& coeff(int k) const { return c_[k]; }
  ChartElem& coeff(int k) { return c_[k]; }

  bool is_zero() const;
  FormalC operator-() const;
  friend FormalC operator+(const FormalC& a, const FormalC& b);
  friend FormalC operator-(const FormalC& a, const FormalC& b);
  friend FormalC operator*(const FormalC& a, const FormalC& b);
  FormalC& operator+=(const FormalC& b) { return *this = *this + b; }
  FormalC& operator-=(const FormalC& b) { return *this = *this - b; }
  FormalC& operator*=(const FormalC& b) { return *this = *this * b; }
  friend bool operator==(const FormalC& a, const FormalC& b) { return (a - b).is_zero(); }
  FormalC times(const ChartElem& s) const;

  std::string to_string() const;

 private:
  const ChartCtx* ctx_ = nullptr;
  std::vector<ChartElem> c_;
};

// The image of t under sigma: chi t (1 - alpha c t)^{-1}.
FormalC galois_image_of_t(const GroupElt& s, const OkElem& alpha, const ChartCtx& ctx, int order);
// Substitutes t -> sigma(t); trivial on K and on chart variables.
FormalC galois_act_t(const GroupElt& s, const FormalC& x, const OkElem& alpha);
Matrix<FormalC> galois_act_t(const GroupElt& s, const Matrix<FormalC>& x, const OkElem& alpha);

}  // namespace htlab
