#include "htlab/linalg.hpp"

#include <sstream>

namespace htlab {

ChartMatrix chart_zero(const ChartCtx& ctx, std::size_t rows, std::size_t cols) {
  return ChartMatrix(rows, cols, ChartElem(ctx));
}

ChartMatrix chart_identity(const ChartCtx& ctx, std::size_t n) {
  return ChartMatrix::identity(n, ChartElem(ctx, 1), ChartElem(ctx));
}

ChartMatrix chart_scaled(const ChartMatrix& m, const KElem& s) {
  return m.map([&](const ChartElem& x) { return x.times(s); });
}

ChartMatrix chart_shifted(const ChartMatrix& m, const KElem& s) {
  ChartMatrix r = m;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) r(i, i) = r(i, i) + ChartElem(m(i, i).ctx(), s);
  return r;
}

ChartMatrix commutator(const ChartMatrix& a, const ChartMatrix& b) { return a * b - b * a; }

bool is_zero(const ChartMatrix& m) {
  for (const auto& x : m.data())
    if (!x.is_zero()) return false;
  return true;
}

bool is_integral(const ChartMatrix& m) {
  for (const auto& x : m.data())
    if (!x.is_integral()) return false;
  return true;
}

int low_valuation(const ChartMatrix& m) {
  int v = INT_MAX;
  for (const auto& x : m.data()) v = std::min(v, x.low_valuation());
  return v;
}

int precision(const ChartMatrix& m) {
  int v = INT_MAX;
  for (const auto& x : m.data()) v = std::min(v, x.precision());
  return v;
}

Residual matrix_residual(const ChartMatrix& a, const ChartMatrix& b, const std::string& label) {
  Residual res;
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    res.record(0, label + " shape");
    return res;
  }
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto v = (a(i, j) - b(i, j)).valuation();
      if (v) res.record(*v, label + "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return res;
}

std::string to_string(const ChartMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).to_string();
  }
  os << "]";
  return os.str();
}

KMatrix to_k_matrix(const ChartMatrix& m) {
  return m.map([](const ChartElem& x) {
    if (!x.is_constant()) throw Error(ErrorKind::BadIndex, "matrix entry is not a constant: " + x.to_string());
    return x.constant();
  });
}

ChartMatrix to_chart_matrix(const ChartCtx& ctx, const KMatrix& m) {
  return m.map([&](const KElem& x) { return ChartElem(ctx, x); });
}

std::vector<std::vector<KElem>> kernel_basis(const KMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (cols == 0) return {};
  const OkRing& ring = m.data().front().ring();
  KMatrix a = m;
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(cols, false);
  // Full pivoting on the smallest valuation, eliminating below only.
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t bi = rows, bc = cols;
    int best_v = INT_MAX;
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c] || a(i, c).is_zero()) continue;
        const int v = a(i, c).valuation_capped();
        if (v < best_v) {
          best_v = v;
          bi = i;
          bc = c;
        }
      }
    if (bi == rows) break;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(bi, j));
    const KElem inv = a(r, bc).inverse();
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a(i, bc).is_zero()) continue;
      const KElem f = a(i, bc) * inv;
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = a(i, j) - f * a(r, j);
    }
    pivot_col.push_back(bc);
    is_pivot[bc] = true;
  }
  std::vector<std::vector<KElem>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<KElem> v(cols, KElem::zero(ring));
    v[free] = KElem::one(ring);
    for (std::size_t k = pivot_col.size(); k-- > 0;) {
      KElem acc = KElem::zero(ring);
      for (std::size_t j = 0; j < cols; ++j)
        if (j != pivot_col[k]) acc += a(k, j) * v[j];
      v[pivot_col[k]] = -acc / a(k, pivot_col[k]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

KMatrix vstack(const std::vector<KMatrix>& blocks) {
  if (blocks.empty()) return {};
  std::size_t rows = 0;
  const std::size_t cols = blocks.front().cols();
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw Error(ErrorKind::BadIndex, "stacked blocks differ in width");
    rows += b.rows();
  }
  KMatrix out;
  out.reshape(rows, cols);
  std::size_t at = 0;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i, ++at)
      for (std::size_t j = 0; j < cols; ++j) out(at, j) = b(i, j);
  return out;
}

}  // namespace htlab
