#pragma once

// Truncated divided-power polynomial rings R{X_1..X_n, Y_{k,j}} standing in
// for the degree-n terms of the cosimplicial ring, their face maps, and
// their evaluation as functions on n-tuples of group elements.
//
// Elements are dense over the basis of pd monomials X^[a] Y^[b] of total
// degree <= D. Variable slots: X_1..X_n first (absent for the relative
// variant), then Y_{k,j} ordered by k, then j.

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "htlab/chart.hpp"
#include "htlab/formal.hpp"
#include "htlab/report.hpp"

namespace htlab {

enum class PdVariant { AbsArith, AbsGeom, RelGeom };

const char* to_string(PdVariant v);

inline constexpr int kMaxPdVars = 16;

using PdIndex = std::array<std::uint8_t, kMaxPdVars>;

struct PdShape {
  PdVariant variant = PdVariant::AbsArith;
  int n = 1;  // cosimplicial degree
  int d = 0;  // number of Y families
  int D = 5;  // pd-degree cutoff

  bool has_x() const { return variant != PdVariant::RelGeom; }
  bool has_y() const { return variant != PdVariant::AbsArith; }
  int x_count() const { return has_x() ? n : 0; }
  int num_vars() const { return x_count() + (has_y() ? d * n : 0); }
  int x_slot(int j) const;         // j in 1..n
  int y_slot(int k, int j) const;  // k in 1..d, j in 1..n
  std::string slot_name(int slot) const;
  PdShape with_degree(int m) const {
    PdShape s = *this;
    s.n = m;
    return s;
  }
  friend bool operator==(const PdShape&, const PdShape&) = default;
};

// Basis of pd monomials of total degree <= D in `nv` variables, sorted by
// degree and then lexicographically.
class PdBasis {
 public:
  static const PdBasis& get(int nv, int D);

  int num_vars() const { return nv_; }
  int cutoff() const { return D_; }
  std::size_t size() const { return monos_.size(); }
  const PdIndex& mono(std::size_t k) const { return monos_[k]; }
  int degree(std::size_t k) const { return degree_[k]; }
  // Number of monomials of degree <= g.
  std::size_t count_up_to(int g) const { return g < 0 ? 0 : (g >= D_ ? monos_.size() : start_[g + 1]); }
  // Position of a monomial, or -1 if it exceeds the cutoff.
  int position(const PdIndex& m) const;

 private:
  PdBasis(int nv, int D);
  int nv_, D_;
  std::vector<PdIndex> monos_;
  std::vector<int> degree_;
  std::vector<std::size_t> start_;
  std::unordered_map<std::uint64_t, int> lookup_;
};

class PdElement {
 public:
  PdElement() = default;
  PdElement(const PdShape& shape, const ChartCtx& ctx);  // zero
  static PdElement constant(const PdShape& shape, const ChartElem& c);
  static PdElement variable(const PdShape& shape, const ChartCtx& ctx, int slot);
  static PdElement x(const PdShape& shape, const ChartCtx& ctx, int j) { return variable(shape, ctx, shape.x_slot(j)); }
  static PdElement y(const PdShape& shape, const ChartCtx& ctx, int k, int j) {
    return variable(shape, ctx, shape.y_slot(k, j));
  }
  // c * prod_v var_v^[a_v]
  static PdElement monomial(const PdShape& shape, const PdIndex& a, const ChartElem& c);

  const PdShape& shape() const { return shape_; }
  const PdBasis& basis() const { return *basis_; }
  const ChartCtx& ctx() const { return *ctx_; }
  std::size_t size() const { return coeffs_.size(); }
  const ChartElem& coeff(std::size_t k) const { return coeffs_[k]; }
  ChartElem& coeff(std::size_t k) { return coeffs_[k]; }
  // Coefficient of the given pd monomial (zero if beyond the cutoff).
  ChartElem coeff_of(const PdIndex& a) const;
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  bool is_zero() const;
  // Integrality certificate: every coefficient has valuation >= 0.
  bool is_integral() const;
  // Largest degree with a nonzero (or imprecise) coefficient, -1 for exact zero.
  int top_degree() const;

  PdElement operator-() const;
  friend PdElement operator+(const PdElement& a, const PdElement& b);
  friend PdElement operator-(const PdElement& a, const PdElement& b);
  PdElement& operator+=(const PdElement& b);
  PdElement& operator-=(const PdElement& b) { return *this += -b; }
  PdElement times(const ChartElem& s) const;
  // Adds s * b to this element.
  void add_scaled(const PdElement& b, const ChartElem& s);

  std::string to_string() const;

 private:
  PdShape shape_;
  const PdBasis* basis_ = nullptr;
  const ChartCtx* ctx_ = nullptr;
  std::vector<ChartElem> coeffs_;
  bool truncated_ = false;
};

// X^[a] X^[b] = C(a+b, a) X^[a+b]; products beyond the cutoff are dropped
// and flagged.
PdElement pd_mul(const PdElement& a, const PdElement& b);
// gamma_n(z) = z^n / n! computed over K; z must have zero constant term.
// Throws IntegralityFailure if z is integral but the result is not.
PdElement pd_divided_power(const PdElement& z, int n);

// Coefficientwise comparison: residual of a - b.
Residual pd_residual(const PdElement& a, const PdElement& b);

struct FaceParams {
  OkElem alpha;
};

// The coface p_i from degree n to degree n+1, as a ring homomorphism.
// Images of pd monomials are cached, so applying one map to many elements
// of the same shape is cheap.
class FaceMap {
 public:
  FaceMap(int i, const PdShape& source, const ChartCtx& ctx, const FaceParams& params);

  const PdShape& source() const { return source_; }
  const PdShape& target() const { return target_; }
  PdElement apply(const PdElement& x) const;
  // Image of a generator slot of the source.
  const PdElement& generator_image(int slot) const { return gen_images_[slot]; }

 private:
  const PdElement& monomial_image(std::size_t k) const;

  int i_;
  PdShape source_, target_;
  const ChartCtx* ctx_;
  std::vector<PdElement> gen_images_;
  std::vector<int> relabel_;  // target slot of each source slot when i > 0
  mutable std::vector<std::vector<PdElement>> gen_powers_;  // [slot][m] = gamma_m(image)
  mutable std::vector<PdElement> mono_images_;
  mutable std::vector<bool> mono_ready_;
};

PdElement face_map(int i, const PdElement& x, const FaceParams& params);

struct CosimplicialEntry {
  int i = 0, j = 0;
  int degree = 1;  // source degree of the generator
  std::string generator;
  Residual residual;
};

struct CosimplicialReport {
  bool ok = true;
  std::vector<CosimplicialEntry> entries;
};

// Checks p_j p_i = p_i p_{j-1} (i < j) on every generator of every source
// degree 1..max_degree.
CosimplicialReport check_cosimplicial_identities(const FaceParams& params, PdVariant variant, int d, int max_degree,
                                                 int D, const ChartCtx& ctx);

// Substitutes X_j -> c(s_1...s_j) t, Y_{k,j} -> n(s_1...s_j)_k t and
// z^[m] -> z^m / m! in K[[t]]/(t^T).
FormalC evaluate_at_group(const PdElement& x, const std::vector<GroupElt>& sigmas, int T);

}  // namespace htlab
