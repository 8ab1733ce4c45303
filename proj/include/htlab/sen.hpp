#pragma once

// The Galois side: the cocycle U(sigma) attached to Higgs data, Sen
// operators, the period-ring kernel for the geometric part, the factor of the
// inverse Simpson functor, and the fixed points H^0.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "htlab/formal.hpp"
#include "htlab/higgs.hpp"

namespace htlab {

using FormalMatrix = Matrix<FormalC>;

FormalMatrix formal_identity(const ChartCtx& ctx, std::size_t n, int T);
// m * t^k
FormalMatrix formal_lift(const ChartMatrix& m, int k, int T);
Residual formal_residual(const FormalMatrix& a, const FormalMatrix& b, const std::string& label);

// U(sigma) = sum_{n + |I| < T} A_{n,I} c^n n^I t^{n+|I|} / (n! I!).
FormalMatrix cocycle_matrix(const BaseConfig& cfg, const HiggsData& h, const GroupElt& s, int T);

struct CocycleLawReport {
  bool ok = true;
  int pairs = 0;
  Residual residual;
};

// U(s u) = U(s) s(U(u)) mod t^T on every pair. Validates h first.
CocycleLawReport verify_cocycle_law(const BaseConfig& cfg, const HiggsData& h,
                                    const std::vector<std::pair<GroupElt, GroupElt>>& pairs, int T);

// -A / alpha with alpha the twist constant of h.
ChartMatrix sen_operator(const BaseConfig& cfg, const HiggsData& h);

// Residual of U(s) against I + t (sum n_i Theta_i + c A) mod t^2.
Residual sen_first_order(const BaseConfig& cfg, const HiggsData& h, const GroupElt& s);

// Kernel of theta_H + sum_i d/dY_i on M (x) K[[t]][Y_1..Y_d] with
// theta_H = -t Theta. The basis is the columns of F = sum_J F_J Y^J with
// F_0 = I; the closed form is exp(t sum Y_i Theta_i).
struct PeriodKernel {
  int rank = 0;
  int d = 0;
  int T = 0;
  int Dy = 0;
  const ChartCtx* base = nullptr;
  std::map<std::vector<int>, FormalMatrix> coeffs;  // all J with |J| < Dy
  Residual kernel_residual;                         // of theta_H F + dF
};

// Throws KernelRankDeficit if the basis does not close up below Y-degree Dy.
PeriodKernel period_kernel(const HiggsData& h, int T, int Dy);

struct PeriodAction {
  FormalMatrix matrix;  // s(F) = F * matrix
  Residual residual;
};

// Action of s = gamma^n g with c(g) = 0 through Y -> chi^{-1} (Y + n),
// t -> chi t. The matrix is read off the Y^0 coefficient.
PeriodAction period_action(const BaseConfig& cfg, const PeriodKernel& k, const GroupElt& s);

// (1 - c alpha t)^{-A/alpha}, computed as exp((A/alpha) sum_k (c alpha t)^k / k).
FormalMatrix galois_factor(const BaseConfig& cfg, const HiggsData& h, Int c, int T);

struct CrosscheckReport {
  bool ok = true;
  int samples = 0;
  Residual residual;
  Residual kernel_residual;
};

// U(s) against (period action of gamma^n) * galois_factor(c) for s = (n, c, chi).
CrosscheckReport crosscheck_inverse_simpson(const BaseConfig& cfg, const HiggsData& h,
                                            const std::vector<GroupElt>& samples, int T, int Dy);

struct FScalings {
  // Arithmetic Higgs side: Theta unchanged, phi -> -A / alpha.
  std::vector<ChartMatrix> f3_theta;
  ChartMatrix f3_phi;
  // Galois-Higgs side: theta_H = lambda (zeta_p - 1) Theta = -t Theta; the
  // Galois factor is (1 - c alpha t)^{-A/alpha}.
  std::vector<FormalMatrix> f1_theta;
  ChartMatrix f1_exponent;  // -A / alpha
  std::string sign_identity = "lambda*(zeta_p - 1) = -t";
};
FScalings f_scalings(const BaseConfig& cfg, const HiggsData& h, int T);

struct H0Report {
  std::vector<std::vector<KElem>> fixed;     // solutions of U(s) v = v for generic s
  std::vector<std::vector<KElem>> expected;  // ker A cap ker Theta_1 cap ... cap ker Theta_d
  bool agrees = false;
};
// Point base only.
H0Report h0_fixed_points(const BaseConfig& cfg, const HiggsData& h, int T);

}  // namespace htlab
