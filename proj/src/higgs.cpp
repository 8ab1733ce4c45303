#include "htlab/higgs.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace htlab {

const char* to_string(HiggsFlavor f) {
  switch (f) {
    case HiggsFlavor::AbsArith: return "abs-arith";
    case HiggsFlavor::AbsGeom: return "abs-geom";
    case HiggsFlavor::RelGeom: return "rel-geom";
  }
  return "unknown";
}

const char* to_string(Twist t) { return t == Twist::Log ? "log" : "smooth"; }

PdVariant pd_variant(HiggsFlavor f) {
  switch (f) {
    case HiggsFlavor::AbsArith: return PdVariant::AbsArith;
    case HiggsFlavor::AbsGeom: return PdVariant::AbsGeom;
    case HiggsFlavor::RelGeom: return PdVariant::RelGeom;
  }
  return PdVariant::AbsGeom;
}

OkElem twist_constant(const BaseConfig& cfg, Twist t) { return cfg.alpha(t == Twist::Log); }

HiggsData zero_higgs(HiggsFlavor flavor, int rank, int d, const ChartCtx& base, Twist twist) {
  HiggsData h;
  h.flavor = flavor;
  h.rank = rank;
  h.base = &base;
  h.twist = twist;
  if (flavor == HiggsFlavor::AbsArith) d = 0;
  h.theta.assign(d, chart_zero(base, rank, rank));
  if (h.has_phi()) h.phi = chart_zero(base, rank, rank);
  return h;
}

namespace {

std::string first_nonzero(const ChartMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return "(" + std::to_string(i) + "," + std::to_string(j) + ") = " + m(i, j).to_string();
  return "";
}

void check_shapes(const HiggsData& h) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationFailure, msg); };
  if (h.base == nullptr) fail("Higgs data has no base ring");
  if (h.rank < 0) fail("negative rank");
  if (h.flavor == HiggsFlavor::AbsArith && h.d() != 0) fail("abs-arith data carries no Theta");
  const std::size_t l = h.rank;
  for (const auto& t : h.theta)
    if (t.rows() != l || t.cols() != l) fail("Theta is not " + std::to_string(l) + "x" + std::to_string(l));
  if (h.has_phi() && (h.phi.rows() != l || h.phi.cols() != l)) fail("phi is not " + std::to_string(l) + "x" + std::to_string(l));
}

// Enumerates the multi-indices of {0..}^d with |m| = k.
void multi_indices(int d, int k, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[pos] = k;
    out.push_back(cur);
    return;
  }
  for (int a = k; a >= 0; --a) {
    cur[pos] = a;
    multi_indices(d, k - a, cur, pos + 1, out);
  }
}

std::vector<std::vector<int>> multi_indices(int d, int k) {
  std::vector<std::vector<int>> out;
  if (d == 0) {
    if (k == 0) out.emplace_back();
    return out;
  }
  std::vector<int> cur(d, 0);
  multi_indices(d, k, cur, 0, out);
  return out;
}

}  // namespace

HiggsCertificate validate_higgs(const BaseConfig& cfg, const HiggsData& h) {
  check_shapes(h);
  HiggsCertificate cert;
  const ChartCtx& ctx = *h.base;
  const KElem alpha(twist_constant(cfg, h.twist));
  const int d = h.d();
  const std::size_t l = h.rank;

  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const ChartMatrix c = commutator(h.theta[i], h.theta[j]);
      if (!is_zero(c))
        throw Error(ErrorKind::CommutationFailure, "[Theta_" + std::to_string(i + 1) + ", Theta_" + std::to_string(j + 1) +
                                                       "] != 0 at " + first_nonzero(c));
    }
  cert.checks.push_back({"commutation", Status::Pass, ""});

  if (h.has_phi()) {
    for (int i = 0; i < d; ++i) {
      const ChartMatrix c = commutator(h.theta[i], h.phi) - chart_scaled(h.theta[i], alpha);
      if (!is_zero(c))
        throw Error(ErrorKind::BraidFailure,
                    "[Theta_" + std::to_string(i + 1) + ", A] - twist * Theta_" + std::to_string(i + 1) + " != 0 at " +
                        first_nonzero(c));
    }
    cert.checks.push_back({"braid", Status::Pass, ""});
  }

  cert.target_precision = cfg.ring->full_precision();
  cert.status = Status::Undecided;
  if (h.has_phi()) {
    cert.target_precision = std::min(cert.target_precision, precision(h.phi));
    ChartMatrix P = chart_identity(ctx, l);
    for (int n = 1; n <= cfg.cutoffs.n_max; ++n) {
      P = chart_shifted(h.phi, alpha.scaled(n - 1)) * P;
      cert.last_valuation = low_valuation(P);
      if (l == 0 || cert.last_valuation >= cert.target_precision) {
        cert.status = Status::Pass;
        cert.n_star = n;
        break;
      }
    }
  } else {
    // Topological nilpotence: every monomial Theta^m with |m| = k is small.
    for (const auto& t : h.theta) cert.target_precision = std::min(cert.target_precision, precision(t));
    std::map<std::vector<int>, ChartMatrix> prev;
    prev[std::vector<int>(d, 0)] = chart_identity(ctx, l);
    if (d == 0 || l == 0) {
      cert.status = Status::Pass;
      cert.n_star = 0;
    }
    for (int k = 1; k <= cfg.cutoffs.n_max && cert.status != Status::Pass; ++k) {
      std::map<std::vector<int>, ChartMatrix> cur;
      int low = INT_MAX;
      for (const auto& m : multi_indices(d, k)) {
        const int i = static_cast<int>(std::find_if(m.begin(), m.end(), [](int x) { return x > 0; }) - m.begin());
        std::vector<int> rest = m;
        --rest[i];
        ChartMatrix v = h.theta[i] * prev.at(rest);
        low = std::min(low, low_valuation(v));
        cur.emplace(m, std::move(v));
      }
      cert.last_valuation = low;
      if (low >= cert.target_precision) {
        cert.status = Status::Pass;
        cert.n_star = k;
      }
      prev = std::move(cur);
    }
  }
  cert.checks.push_back({"convergence", cert.status,
                         cert.n_star ? "converged at n = " + std::to_string(*cert.n_star)
                                     : "undecided within horizon " + std::to_string(cfg.cutoffs.n_max)});

  if (h.has_phi()) {
    for (int i = 0; i < d; ++i) {
      ChartMatrix pw = chart_identity(ctx, l);
      for (std::size_t k = 0; k < l; ++k) pw = pw * h.theta[i];
      if (!is_zero(pw))
        throw Error(ErrorKind::NilpotenceFailure,
                    "Theta_" + std::to_string(i + 1) + "^" + std::to_string(l) + " != 0 at " + first_nonzero(pw));
    }
    cert.checks.push_back({"nilpotence", Status::Pass, ""});
  }

  const int floor = h.integral ? 0 : -cfg.e() * cfg.cutoffs.s_max;
  auto check_entries = [&](const ChartMatrix& m, const std::string& name) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const ChartElem& x = m(i, j);
        if (h.integral ? !x.is_integral() : x.low_valuation() < floor)
          throw Error(ErrorKind::IntegralityFailure, name + "(" + std::to_string(i) + "," + std::to_string(j) +
                                                         ") = " + x.to_string() + " has valuation below " +
                                                         std::to_string(floor));
      }
  };
  for (int i = 0; i < d; ++i) check_entries(h.theta[i], "Theta_" + std::to_string(i + 1));
  if (h.has_phi()) check_entries(h.phi, "A");
  cert.checks.push_back({"integrality", Status::Pass, h.integral ? "integral" : "rational"});
  return cert;
}

// ---------------------------------------------------------------- stratifications

std::string StratKey::to_string() const {
  std::string s = "(" + std::to_string(n) + ",[";
  for (std::size_t k = 0; k < I.size(); ++k) s += (k ? "," : "") + std::to_string(I[k]);
  return s + "])";
}

const ChartMatrix* Stratification::find(const StratKey& k) const {
  auto it = coeffs.find(k);
  return it == coeffs.end() ? nullptr : &it->second;
}

const ChartMatrix& Stratification::at(const StratKey& k) const {
  const ChartMatrix* m = find(k);
  if (!m) throw Error(ErrorKind::BadIndex, "no stratification coefficient " + k.to_string());
  return *m;
}

std::vector<StratKey> strat_keys(HiggsFlavor flavor, int d, int D) {
  const PdShape shape{pd_variant(flavor), 1, flavor == HiggsFlavor::AbsArith ? 0 : d, D};
  const PdBasis& basis = PdBasis::get(shape.num_vars(), D);
  std::vector<StratKey> keys;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const PdIndex& a = basis.mono(k);
    StratKey key;
    key.n = shape.has_x() ? a[shape.x_slot(1)] : 0;
    if (shape.has_y())
      for (int i = 1; i <= shape.d; ++i) key.I.push_back(a[shape.y_slot(i, 1)]);
    keys.push_back(std::move(key));
  }
  return keys;
}

Stratification stratification_closed_form(const BaseConfig& cfg, const HiggsData& h, int D) {
  check_shapes(h);
  if (D < 1) throw Error(ErrorKind::BadIndex, "stratification cutoff must be positive");
  const ChartCtx& ctx = *h.base;
  const KElem alpha(twist_constant(cfg, h.twist));
  Stratification s;
  s.flavor = h.flavor;
  s.rank = h.rank;
  s.d = h.d();
  s.D = D;
  s.base = h.base;
  s.twist = h.twist;

  std::vector<ChartMatrix> P{chart_identity(ctx, h.rank)};
  if (h.has_phi())
    for (int n = 1; n <= D; ++n) P.push_back(chart_shifted(h.phi, alpha.scaled(n - 1)) * P.back());

  std::map<std::vector<int>, ChartMatrix> theta_pow;
  for (const StratKey& key : strat_keys(h.flavor, s.d, D)) {
    auto it = theta_pow.find(key.I);
    if (it == theta_pow.end()) {
      ChartMatrix m = chart_identity(ctx, h.rank);
      for (int i = 0; i < s.d; ++i)
        for (int k = 0; k < key.I[i]; ++k) m = m * h.theta[i];
      it = theta_pow.emplace(key.I, std::move(m)).first;
    }
    s.coeffs.emplace(key, it->second * P[key.n]);
  }
  return s;
}

Stratification stratification_from_higgs(const BaseConfig& cfg, const HiggsData& h, int D) {
  validate_higgs(cfg, h);
  return stratification_closed_form(cfg, h, D);
}

HiggsData higgs_from_stratification(const BaseConfig& cfg, const Stratification& s) {
  if (s.base == nullptr) throw Error(ErrorKind::ValidationFailure, "stratification has no base ring");
  const ChartCtx& ctx = *s.base;
  const int d = s.flavor == HiggsFlavor::AbsArith ? 0 : s.d;
  const StratKey unit{0, std::vector<int>(d, 0)};
  const ChartMatrix* a00 = s.find(unit);
  if (!a00 || !matrix_residual(*a00, chart_identity(ctx, s.rank), "A").zero())
    throw Error(ErrorKind::InvalidUnitCoefficient, "A_{0,0} is not the identity");

  HiggsData h = zero_higgs(s.flavor, s.rank, d, ctx, s.twist);
  for (int i = 0; i < d; ++i) {
    StratKey k{0, std::vector<int>(d, 0)};
    k.I[i] = 1;
    h.theta[i] = s.at(k);
  }
  if (h.has_phi()) h.phi = s.at(StratKey{1, std::vector<int>(d, 0)});
  h.integral = true;
  for (const auto& [key, m] : s.coeffs)
    if (!is_integral(m)) h.integral = false;

  const Stratification closed = stratification_closed_form(cfg, h, s.D);
  for (const auto& [key, m] : s.coeffs) {
    const ChartMatrix* expected = closed.find(key);
    if (!expected) throw Error(ErrorKind::ClosedFormMismatch, "unexpected coefficient " + key.to_string());
    const Residual r = matrix_residual(m, *expected, "A" + key.to_string());
    if (!r.zero()) throw Error(ErrorKind::ClosedFormMismatch, key.to_string() + " differs at " + r.first_witness);
  }
  validate_higgs(cfg, h);
  return h;
}

RecursionReport check_recursions(const BaseConfig& cfg, const Stratification& s) {
  RecursionReport rep;
  const KElem alpha(twist_constant(cfg, s.twist));
  const int d = s.flavor == HiggsFlavor::AbsArith ? 0 : s.d;
  const ChartMatrix* A = s.flavor == HiggsFlavor::RelGeom ? nullptr : s.find(StratKey{1, std::vector<int>(d, 0)});
  for (const auto& [key, m] : s.coeffs) {
    if (A) {
      const ChartMatrix* next = s.find(StratKey{key.n + 1, key.I});
      if (next) {
        const int total = key.n + std::accumulate(key.I.begin(), key.I.end(), 0);
        rep.first.merge(matrix_residual(*next, chart_shifted(*A, alpha.scaled(total)) * m,
                                        "A" + StratKey{key.n + 1, key.I}.to_string()));
      }
    }
    for (int k = 0; k < d; ++k) {
      if (key.I[k] == 0) continue;
      StratKey lower = key;
      --lower.I[k];
      StratKey ek{0, std::vector<int>(d, 0)};
      ek.I[k] = 1;
      rep.second.merge(matrix_residual(m, s.at(ek) * s.at(lower), "A" + key.to_string()));
    }
  }
  return rep;
}

Matrix<PdElement> stratification_matrix(const Stratification& s, int D) {
  const int d = s.flavor == HiggsFlavor::AbsArith ? 0 : s.d;
  const PdShape shape{pd_variant(s.flavor), 1, d, D};
  const ChartCtx& ctx = *s.base;
  Matrix<PdElement> eps(s.rank, s.rank, PdElement(shape, ctx));
  for (const auto& [key, m] : s.coeffs) {
    const int total = key.n + std::accumulate(key.I.begin(), key.I.end(), 0);
    if (total > D) continue;
    PdIndex a{};
    if (shape.has_x()) a[shape.x_slot(1)] = static_cast<std::uint8_t>(key.n);
    for (int k = 1; k <= d; ++k) a[shape.y_slot(k, 1)] = static_cast<std::uint8_t>(key.I[k - 1]);
    for (int i = 0; i < s.rank; ++i)
      for (int j = 0; j < s.rank; ++j)
        if (!m(i, j).is_exact_zero()) eps(i, j) += PdElement::monomial(shape, a, m(i, j));
  }
  return eps;
}

CocycleReport check_cocycle(const BaseConfig& cfg, const Stratification& s, int D) {
  if (D > s.D) throw Error(ErrorKind::BadIndex, "cocycle cutoff exceeds the stratification cutoff");
  const ChartCtx& ctx = *s.base;
  const Matrix<PdElement> eps = stratification_matrix(s, D);
  const PdShape shape = s.rank > 0 ? eps(0, 0).shape() : PdShape{pd_variant(s.flavor), 1, s.d, D};
  const FaceParams params{twist_constant(cfg, s.twist)};
  const FaceMap p0(0, shape, ctx, params), p1(1, shape, ctx, params), p2(2, shape, ctx, params);
  const std::size_t l = s.rank;

  auto apply = [&](const FaceMap& f) { return eps.map([&](const PdElement& x) { return f.apply(x); }); };
  const Matrix<PdElement> e0 = apply(p0), e1 = apply(p1), e2 = apply(p2);
  const PdShape target = p0.target();

  CocycleReport rep;
  Matrix<PdElement> diff(l, l, PdElement(target, ctx));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      PdElement acc = -e1(i, j);
      for (std::size_t k = 0; k < l; ++k) acc += pd_mul(e2(i, k), e0(k, j));
      diff(i, j) = std::move(acc);
    }

  // Comparison order: total degree, then degree in the Y_{k,1}, then basis order.
  const PdBasis& basis = PdBasis::get(target.num_vars(), D);
  std::vector<std::size_t> order(basis.size());
  std::iota(order.begin(), order.end(), 0);
  auto y1_degree = [&](std::size_t k) {
    int deg = 0;
    if (target.has_y())
      for (int i = 1; i <= target.d; ++i) deg += basis.mono(k)[target.y_slot(i, 1)];
    return deg;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (basis.degree(a) != basis.degree(b)) return basis.degree(a) < basis.degree(b);
    return y1_degree(a) < y1_degree(b);
  });
  for (std::size_t k : order)
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < l; ++j) {
        const auto v = diff(i, j).coeff(k).valuation();
        if (!v) continue;
        const PdIndex& a = basis.mono(k);
        std::string mono;
        for (int var = 0; var < target.num_vars(); ++var) {
          if (a[var] == 0) continue;
          if (!mono.empty()) mono += "*";
          mono += target.slot_name(var);
          if (a[var] > 1) mono += "^[" + std::to_string(a[var]) + "]";
        }
        if (mono.empty()) mono = "1";
        const std::string witness = "(" + std::to_string(i) + "," + std::to_string(j) + ") " + mono;
        rep.residual.record(*v, witness);
        rep.failing.push_back(witness);
      }
  rep.ok = rep.residual.zero();
  return rep;
}

HiggsData log_from_smooth(const BaseConfig& cfg, const HiggsData& h) {
  HiggsData in = h;
  in.twist = Twist::Smooth;
  try {
    validate_higgs(cfg, in);
  } catch (const Error& err) {
    throw Error(ErrorKind::ValidationFailure, std::string("input is not valid smooth Higgs data: ") + err.what());
  }
  HiggsData out = in;
  out.twist = Twist::Log;
  if (out.has_phi()) out.phi = chart_scaled(in.phi, KElem(cfg.pi()));
  try {
    validate_higgs(cfg, out);
  } catch (const Error& err) {
    throw Error(ErrorKind::ValidationFailure, std::string("output fails log validation: ") + err.what());
  }
  return out;
}

}  // namespace htlab
