#pragma once

// Higgs complexes, Smith normal form over O_K, and cohomology of the
// absolute complexes with O_K or K coefficients.

#include <string>
#include <vector>

#include "htlab/higgs.hpp"

namespace htlab {

struct ComplexTerm {
  int rank = 0;
  int twist = 0;  // Breuil-Kisin twist label {twist}
};

struct ComplexRep {
  HiggsFlavor origin = HiggsFlavor::AbsGeom;
  int module_rank = 0;
  int d = 0;
  std::vector<ComplexTerm> terms;
  // differentials[k] : C^k -> C^{k+1}, acting on column vectors.
  std::vector<ChartMatrix> differentials;
  // Source data, kept for the commuting-square check.
  std::vector<ChartMatrix> theta;
  ChartMatrix phi;
  OkElem twist_constant;
};

// rel-geom: the Koszul complex of Theta. abs-arith: [M -A-> M]. abs-geom:
// total complex with C^n = C^{n,0} + C^{n-1,1} and
// d(x in C^{k,r}) = (-1)^r theta(x) + (A + k twist) x.
// Koszul sign on dlogT_S -> dlogT_{S+i} is (-1)^{#{s in S : s < i}}.
ComplexRep build_higgs_complex(const BaseConfig& cfg, const HiggsData& h);

struct ComplexCheck {
  bool ok = true;
  Residual residual;
};

// d o d = 0, and for abs-geom origins Theta_i (A + k a) = (A + (k+1) a) Theta_i.
ComplexCheck verify_complex(const ComplexRep& c);

using OkMatrix = Matrix<OkElem>;

struct SnfResult {
  // U * M * V = diag(pi^{v_1}, ..., pi^{v_r}, 0, ...).
  OkMatrix U, V, U_inv, V_inv;
  std::vector<int> divisors;  // ascending
  // The trailing zero block is known modulo pi^certified_precision.
  int certified_precision = 0;
  int rank() const { return static_cast<int>(divisors.size()); }
};

// Throws InsufficientPrecision if the trailing block is known to fewer
// than min_precision digits.
SnfResult snf_dvr(const OkMatrix& m, int min_precision = 1);

struct CohomologyGroup {
  int degree = 0;
  int free_rank = 0;
  std::vector<int> torsion;  // valuations of the cyclic factors O_K / pi^v
  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  std::string to_string() const;
};

struct CohomologyReport {
  bool over_k = false;
  std::vector<CohomologyGroup> groups;  // degrees 0 .. length-1
  bool verified = false;                // complex verified and tor-amplitude respected
};

// Requires the point base. Rational data (or over_k) reports K-dimensions.
CohomologyReport cohomology_abs(const BaseConfig& cfg, const HiggsData& h, bool over_k = false, int min_precision = -1);

// log_p of |ker| and |coker| of the map over O_K / pi^m described by an SNF
// of an (rows x cols) matrix, with residue field F_p.
struct FiniteSizes {
  int kernel = 0;
  int cokernel = 0;
};
FiniteSizes finite_ring_sizes(const SnfResult& snf, int rows, int cols, int m);

OkMatrix to_ok_matrix(const ChartMatrix& m);

}  // namespace htlab
