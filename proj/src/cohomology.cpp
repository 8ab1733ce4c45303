#include "htlab/cohomology.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace htlab {

namespace {

// Subsets of {0..d-1} of size k in lexicographic order.
std::vector<std::vector<int>> subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < d; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

int koszul_sign(const std::vector<int>& S, int i) {
  int below = 0;
  for (int s : S)
    if (s < i) ++below;
  return below % 2 ? -1 : 1;
}

void put_block(ChartMatrix& dst, std::size_t r0, std::size_t c0, const ChartMatrix& blk, int sign) {
  for (std::size_t i = 0; i < blk.rows(); ++i)
    for (std::size_t j = 0; j < blk.cols(); ++j) dst(r0 + i, c0 + j) = sign > 0 ? blk(i, j) : -blk(i, j);
}

// A block layout of one term of the complex: (koszul degree k, column r).
struct Layout {
  std::vector<std::pair<int, int>> blocks;  // (k, r) in order
  std::map<std::pair<int, int>, std::size_t> offset_of;  // offset of the (k, r) part
  std::size_t size = 0;
};

}  // namespace

ComplexRep build_higgs_complex(const BaseConfig& cfg, const HiggsData& h) {
  try {
    validate_higgs(cfg, h);
  } catch (const Error& err) {
    // Shape problems are fatal; algebraic failures are left to verify_complex.
    if (err.kind() == ErrorKind::ValidationFailure) throw;
  }
  const ChartCtx& ctx = *h.base;
  const std::size_t l = h.rank;
  const int d = h.d();
  ComplexRep c;
  c.origin = h.flavor;
  c.module_rank = h.rank;
  c.d = d;
  c.theta = h.theta;
  c.phi = h.phi;
  c.twist_constant = twist_constant(cfg, h.twist);
  const KElem alpha(c.twist_constant);

  std::vector<std::vector<std::vector<int>>> subs(d + 1);
  for (int k = 0; k <= d; ++k) subs[k] = subsets(d, k);
  auto subset_index = [&](int k, const std::vector<int>& S) {
    return static_cast<std::size_t>(std::find(subs[k].begin(), subs[k].end(), S) - subs[k].begin());
  };

  const bool vertical = h.has_phi();
  const int length = d + (vertical ? 2 : 1);
  std::vector<Layout> layouts(length);
  for (int n = 0; n < length; ++n) {
    Layout& L = layouts[n];
    for (int r = 0; r <= (vertical ? 1 : 0); ++r) {
      const int k = n - r;
      if (k < 0 || k > d) continue;
      L.blocks.push_back({k, r});
      L.offset_of[{k, r}] = L.size;
      L.size += subs[k].size() * l;
    }
    c.terms.push_back({static_cast<int>(L.size), -n});
  }

  for (int n = 0; n + 1 < length; ++n) {
    const Layout& src = layouts[n];
    const Layout& dst = layouts[n + 1];
    ChartMatrix D = chart_zero(ctx, dst.size, src.size);
    for (const auto& [k, r] : src.blocks) {
      const std::size_t c0 = src.offset_of.at({k, r});
      for (std::size_t si = 0; si < subs[k].size(); ++si) {
        const auto& S = subs[k][si];
        // Horizontal part: theta.
        if (k < d) {
          const std::size_t r0 = dst.offset_of.at({k + 1, r});
          for (int i = 0; i < d; ++i) {
            if (std::find(S.begin(), S.end(), i) != S.end()) continue;
            std::vector<int> T = S;
            T.insert(std::upper_bound(T.begin(), T.end(), i), i);
            const int sign = koszul_sign(S, i) * (r == 1 ? -1 : 1);
            put_block(D, r0 + subset_index(k + 1, T) * l, c0 + si * l, h.theta[i], sign);
          }
        }
        // Vertical part: A + k alpha.
        if (vertical && r == 0) {
          const std::size_t r0 = dst.offset_of.at({k, 1});
          put_block(D, r0 + si * l, c0 + si * l, chart_shifted(h.phi, alpha.scaled(k)), 1);
        }
      }
    }
    c.differentials.push_back(std::move(D));
  }
  return c;
}

ComplexCheck verify_complex(const ComplexRep& c) {
  ComplexCheck out;
  if (c.origin == HiggsFlavor::AbsGeom && !c.phi.empty()) {
    const KElem alpha(c.twist_constant);
    for (int k = 0; k < c.d; ++k)
      for (int i = 0; i < c.d; ++i) {
        const ChartMatrix lhs = c.theta[i] * chart_shifted(c.phi, alpha.scaled(k));
        const ChartMatrix rhs = chart_shifted(c.phi, alpha.scaled(k + 1)) * c.theta[i];
        out.residual.merge(
            matrix_residual(lhs, rhs, "square k=" + std::to_string(k) + " Theta_" + std::to_string(i + 1)));
      }
  }
  for (std::size_t k = 0; k + 1 < c.differentials.size(); ++k) {
    const ChartMatrix dd = c.differentials[k + 1] * c.differentials[k];
    const std::string label = "d" + std::to_string(k + 1) + "d" + std::to_string(k);
    for (std::size_t r = 0; r < dd.rows(); ++r)
      for (std::size_t q = 0; q < dd.cols(); ++q)
        if (const auto v = dd(r, q).valuation())
          out.residual.record(*v, label + "(" + std::to_string(r) + "," + std::to_string(q) + ")");
  }
  out.ok = out.residual.zero();
  return out;
}

// ---------------------------------------------------------------- SNF

OkMatrix to_ok_matrix(const ChartMatrix& m) {
  return m.map([](const ChartElem& x) {
    if (!x.is_constant()) throw Error(ErrorKind::BadIndex, "entry is not a constant: " + x.to_string());
    return x.constant().to_ok();
  });
}

namespace {

OkMatrix ok_identity(const OkRing& ring, std::size_t n) {
  return OkMatrix::identity(n, OkElem::one(ring), OkElem::zero(ring));
}

// x * y where y has valuation >= v: computed as pi^v (x (y / pi^v)) so the
// result keeps the precision of y.
OkElem mul_shifted(const OkElem& x, const OkElem& y, int v) { return (x * y.div_pi(v)).mul_pi(v); }

}  // namespace

SnfResult snf_dvr(const OkMatrix& m, int min_precision) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SnfResult res;
  if (m.data().empty()) {
    res.certified_precision = INT_MAX;
    return res;
  }
  const OkRing& ring = m.data().front().ring();
  OkMatrix W = m;
  res.U = ok_identity(ring, rows);
  res.U_inv = ok_identity(ring, rows);
  res.V = ok_identity(ring, cols);
  res.V_inv = ok_identity(ring, cols);

  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    std::size_t pi_ = rows, pj = cols;
    int best = INT_MAX;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (W(i, j).precision() <= 0 || W(i, j).is_zero()) continue;
        const int v = W(i, j).valuation_capped();
        if (v < best) {
          best = v;
          pi_ = i;
          pj = j;
        }
      }
    if (pi_ == rows) break;
    if (pi_ != t) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(W(t, j), W(pi_, j));
      for (std::size_t j = 0; j < rows; ++j) std::swap(res.U(t, j), res.U(pi_, j));
      for (std::size_t i = 0; i < rows; ++i) std::swap(res.U_inv(i, t), res.U_inv(i, pi_));
    }
    if (pj != t) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(W(i, t), W(i, pj));
      for (std::size_t i = 0; i < cols; ++i) std::swap(res.V(i, t), res.V(i, pj));
      for (std::size_t j = 0; j < cols; ++j) std::swap(res.V_inv(t, j), res.V_inv(pj, j));
    }
    const int v = best;
    // Normalize the pivot to pi^v.
    const OkElem u = W(t, t).div_pi(v).inverse();
    const OkElem u_back = W(t, t).div_pi(v);
    for (std::size_t j = t; j < cols; ++j) W(t, j) = mul_shifted(u, W(t, j), v);
    for (std::size_t j = 0; j < rows; ++j) res.U(t, j) = res.U(t, j) * u;
    for (std::size_t i = 0; i < rows; ++i) res.U_inv(i, t) = res.U_inv(i, t) * u_back;
    // Clear the column below and the row to the right.
    for (std::size_t i = t + 1; i < rows; ++i) {
      if (W(i, t).is_zero()) continue;
      const OkElem q = W(i, t).div_pi(v);
      for (std::size_t j = t; j < cols; ++j) W(i, j) = W(i, j) - mul_shifted(q, W(t, j), v);
      for (std::size_t j = 0; j < rows; ++j) res.U(i, j) = res.U(i, j) - q * res.U(t, j);
      for (std::size_t k = 0; k < rows; ++k) res.U_inv(k, t) = res.U_inv(k, t) + res.U_inv(k, i) * q;
      W(i, t) = OkElem::zero(ring);
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (W(t, j).is_zero()) continue;
      const OkElem q = W(t, j).div_pi(v);
      for (std::size_t i = 0; i < cols; ++i) res.V(i, j) = res.V(i, j) - res.V(i, t) * q;
      for (std::size_t k = 0; k < cols; ++k) res.V_inv(t, k) = res.V_inv(t, k) + q * res.V_inv(j, k);
      W(t, j) = OkElem::zero(ring);
    }
    W(t, t) = OkElem::one(ring).mul_pi(v);
    res.divisors.push_back(v);
  }
  res.certified_precision = ring.full_precision();
  for (std::size_t i = t; i < rows; ++i)
    for (std::size_t j = t; j < cols; ++j) res.certified_precision = std::min(res.certified_precision, W(i, j).precision());
  if (res.certified_precision < min_precision)
    throw Error(ErrorKind::InsufficientPrecision, "remaining block known only modulo pi^" +
                                                      std::to_string(res.certified_precision));
  return res;
}

FiniteSizes finite_ring_sizes(const SnfResult& snf, int rows, int cols, int m) {
  FiniteSizes s;
  int diag = 0;
  for (int v : snf.divisors) diag += std::min(v, m);
  const int r = snf.rank();
  s.kernel = diag + m * (cols - r);
  s.cokernel = diag + m * (rows - r);
  return s;
}

// ---------------------------------------------------------------- cohomology

std::string CohomologyGroup::to_string() const {
  std::ostringstream os;
  os << "H^" << degree << " = ";
  bool first = true;
  if (free_rank > 0) {
    os << "free^" << free_rank;
    first = false;
  }
  for (int v : torsion) {
    os << (first ? "" : " + ") << "O/pi^" << v;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

CohomologyReport cohomology_abs(const BaseConfig& cfg, const HiggsData& h, bool over_k, int min_precision) {
  if (h.base == nullptr || !h.base->is_point())
    throw Error(ErrorKind::ValidationFailure, "cohomology is computed over O_K or K coefficients only");
  const ComplexRep c = build_higgs_complex(cfg, h);
  CohomologyReport rep;
  rep.over_k = over_k || !h.integral;
  if (min_precision < 0) min_precision = (cfg.ring->full_precision() + 1) / 2;

  std::vector<SnfResult> snfs;
  for (const auto& D : c.differentials) {
    KMatrix K = to_k_matrix(D);
    int shift = 0;
    for (const auto& x : K.data()) shift = std::max(shift, x.shift());
    if (shift > 0 && !rep.over_k) throw Error(ErrorKind::IntegralityFailure, "differential is not integral");
    const OkMatrix M = K.map([&](const KElem& x) { return x.unit_part().mul_p(shift - x.shift()); });
    snfs.push_back(snf_dvr(M, min_precision));
  }
  const int length = static_cast<int>(c.terms.size());
  for (int k = 0; k < length; ++k) {
    CohomologyGroup g;
    g.degree = k;
    const int out_rank = k < static_cast<int>(snfs.size()) ? snfs[k].rank() : 0;
    const int in_rank = k > 0 ? snfs[k - 1].rank() : 0;
    g.free_rank = c.terms[k].rank - out_rank - in_rank;
    if (k > 0 && !rep.over_k)
      for (int v : snfs[k - 1].divisors)
        if (v > 0) g.torsion.push_back(v);
    rep.groups.push_back(std::move(g));
  }
  const int top = h.flavor == HiggsFlavor::RelGeom ? h.d() : h.d() + 1;
  rep.verified = verify_complex(c).ok && length - 1 <= top;
  return rep;
}

}  // namespace htlab
