#pragma once

// Helpers for matrices over the chart ring and over K.

#include <string>
#include <vector>

#include "htlab/chart.hpp"
#include "htlab/matrix.hpp"
#include "htlab/report.hpp"

namespace htlab {

using ChartMatrix = Matrix<ChartElem>;
using KMatrix = Matrix<KElem>;

ChartMatrix chart_zero(const ChartCtx& ctx, std::size_t rows, std::size_t cols);
ChartMatrix chart_identity(const ChartCtx& ctx, std::size_t n);
ChartMatrix chart_scaled(const ChartMatrix& m, const KElem& s);
// m + s * identity
ChartMatrix chart_shifted(const ChartMatrix& m, const KElem& s);
ChartMatrix commutator(const ChartMatrix& a, const ChartMatrix& b);
bool is_zero(const ChartMatrix& m);
bool is_integral(const ChartMatrix& m);
// Smallest capped valuation over all entries.
int low_valuation(const ChartMatrix& m);
// Smallest precision over all entries.
int precision(const ChartMatrix& m);
// Residual of a - b; witnesses are "label(i,j)".
Residual matrix_residual(const ChartMatrix& a, const ChartMatrix& b, const std::string& label);
std::string to_string(const ChartMatrix& m);

// Constant chart matrices as K-matrices and back.
KMatrix to_k_matrix(const ChartMatrix& m);
ChartMatrix to_chart_matrix(const ChartCtx& ctx, const KMatrix& m);

// Basis of the kernel of a K-matrix (as columns), by Gaussian elimination
// with minimal-valuation pivots. Entries that vanish at their precision are
// treated as zero.
std::vector<std::vector<KElem>> kernel_basis(const KMatrix& m);
// Stacks matrices with equal column counts.
KMatrix vstack(const std::vector<KMatrix>& blocks);

}  // namespace htlab
