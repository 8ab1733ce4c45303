#pragma once

// Enhanced log Higgs modules (M, Theta_1..Theta_d, A) over the chart ring,
// the stratifications they induce on the degree-1 pd ring, and the
// brute-force cocycle check through the face maps.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htlab/config.hpp"
#include "htlab/linalg.hpp"
#include "htlab/pd.hpp"
#include "htlab/report.hpp"

namespace htlab {

enum class HiggsFlavor { AbsArith, AbsGeom, RelGeom };
// Log data braid against beta = pi E'(pi); smooth data against E'(pi).
enum class Twist { Log, Smooth };

const char* to_string(HiggsFlavor f);
const char* to_string(Twist t);
PdVariant pd_variant(HiggsFlavor f);

struct HiggsData {
  HiggsFlavor flavor = HiggsFlavor::AbsGeom;
  int rank = 0;
  const ChartCtx* base = nullptr;
  std::vector<ChartMatrix> theta;
  ChartMatrix phi;  // empty for the relative flavor
  Twist twist = Twist::Log;
  bool integral = true;

  int d() const { return static_cast<int>(theta.size()); }
  bool has_phi() const { return flavor != HiggsFlavor::RelGeom; }
};

OkElem twist_constant(const BaseConfig& cfg, Twist t);

// Zero Higgs data of the given shape.
HiggsData zero_higgs(HiggsFlavor flavor, int rank, int d, const ChartCtx& base, Twist twist = Twist::Log);

struct HiggsCertificate {
  // Pass when the convergence certificate was found, Undecided otherwise.
  Status status = Status::Pass;
  std::optional<int> n_star;
  int target_precision = 0;
  int last_valuation = 0;  // capped valuation of the last partial product
  std::vector<CheckResult> checks;
};

// Checks commutation, braiding, convergence, nilpotence and integrality, in
// that order. Failures throw; an undecided convergence is reported in the
// certificate.
HiggsCertificate validate_higgs(const BaseConfig& cfg, const HiggsData& h);

struct StratKey {
  int n = 0;
  std::vector<int> I;
  auto operator<=>(const StratKey&) const = default;
  std::string to_string() const;
};

struct Stratification {
  HiggsFlavor flavor = HiggsFlavor::AbsGeom;
  int rank = 0;
  int d = 0;
  int D = 0;
  const ChartCtx* base = nullptr;
  Twist twist = Twist::Log;
  std::map<StratKey, ChartMatrix> coeffs;

  const ChartMatrix& at(const StratKey& k) const;
  const ChartMatrix* find(const StratKey& k) const;
};

// All keys (n, I) with n + |I| <= D allowed by the flavor, in degree order.
std::vector<StratKey> strat_keys(HiggsFlavor flavor, int d, int D);

// A_{n,I} = Theta^I (A + (n-1) beta) ... (A + beta) A, without validating.
Stratification stratification_closed_form(const BaseConfig& cfg, const HiggsData& h, int D);
// Validates h first.
Stratification stratification_from_higgs(const BaseConfig& cfg, const HiggsData& h, int D);
HiggsData higgs_from_stratification(const BaseConfig& cfg, const Stratification& s);

// Residual of the two recursions A_{n+1,I} = (A + (|I| + n) beta) A_{n,I}
// and A_{n,I} = A_{0,E_k} A_{n,I-E_k}.
struct RecursionReport {
  Residual first;
  Residual second;
  bool ok() const { return first.zero() && second.zero(); }
};
RecursionReport check_recursions(const BaseConfig& cfg, const Stratification& s);

struct CocycleReport {
  bool ok = true;
  Residual residual;
  // Failing slots as "(i,j) monomial", in comparison order.
  std::vector<std::string> failing;
};

// Builds eps as a matrix over the degree-1 pd ring and compares
// p_2(eps) p_0(eps) with p_1(eps) in degree 2. Slots are compared by total
// degree, then by the degree in the first-index Y variables.
CocycleReport check_cocycle(const BaseConfig& cfg, const Stratification& s, int D);

// eps as a matrix over the degree-1 pd ring at cutoff D.
Matrix<PdElement> stratification_matrix(const Stratification& s, int D);

// (M, theta, phi) valid for E'(pi) -> (M, theta, pi phi) valid for beta.
HiggsData log_from_smooth(const BaseConfig& cfg, const HiggsData& h);

}  // namespace htlab
