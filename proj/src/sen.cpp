#include "htlab/sen.hpp"

#include <algorithm>
#include <numeric>

namespace htlab {

namespace {

void indices_of_degree(int d, int k, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (d == 0) {
    if (k == 0) out.push_back(cur);
    return;
  }
  if (pos == d - 1) {
    cur[pos] = k;
    out.push_back(cur);
    return;
  }
  for (int a = k; a >= 0; --a) {
    cur[pos] = a;
    indices_of_degree(d, k - a, cur, pos + 1, out);
  }
}

std::vector<std::vector<int>> indices_of_degree(int d, int k) {
  std::vector<int> cur(d, 0);
  std::vector<std::vector<int>> out;
  indices_of_degree(d, k, cur, 0, out);
  return out;
}

Int factorial(int n) {
  Int r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

Int binomial(int n, int k) {
  Int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

FormalMatrix formal_zero(const ChartCtx& ctx, std::size_t n, int T) { return FormalMatrix(n, n, FormalC(ctx, T)); }

FormalMatrix formal_times(const FormalMatrix& m, const KElem& s) {
  return m.map([&](const FormalC& x) { return x.times(ChartElem(x.ctx(), s)); });
}

ChartMatrix phi_or_zero(const HiggsData& h) { return h.has_phi() ? h.phi : chart_zero(*h.base, h.rank, h.rank); }

}  // namespace

FormalMatrix formal_identity(const ChartCtx& ctx, std::size_t n, int T) {
  FormalMatrix m = formal_zero(ctx, n, T);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = FormalC::constant(ChartElem(ctx, 1), T);
  return m;
}

FormalMatrix formal_lift(const ChartMatrix& m, int k, int T) {
  return m.map([&](const ChartElem& x) { return FormalC::monomial(x, k, T); });
}

Residual formal_residual(const FormalMatrix& a, const FormalMatrix& b, const std::string& label) {
  Residual r;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const FormalC diff = a(i, j) - b(i, j);
      for (int k = 0; k < diff.order(); ++k)
        if (!diff.coeff(k).is_zero())
          r.record(diff.coeff(k).low_valuation(),
                   label + "(" + std::to_string(i) + "," + std::to_string(j) + ") t^" + std::to_string(k));
    }
  return r;
}

FormalMatrix cocycle_matrix(const BaseConfig& cfg, const HiggsData& h, const GroupElt& s, int T) {
  if (static_cast<int>(s.n.size()) != h.d()) throw Error(ErrorKind::BadIndex, "group element and Higgs data differ in d");
  const OkRing& ring = *cfg.ring;
  const Int m = ring.modulus();
  const ChartCtx& ctx = *h.base;
  const Stratification strat = stratification_closed_form(cfg, h, T - 1);
  FormalMatrix U = formal_zero(ctx, h.rank, T);
  for (const auto& [key, A] : strat.coeffs) {
    Int num = zp::pow(zp::mod(s.c, m), key.n, m);
    Int den = factorial(key.n);
    int deg = key.n;
    for (int i = 0; i < h.d(); ++i) {
      num = zp::mul(num, zp::pow(zp::mod(s.n[i], m), key.I[i], m), m);
      den *= factorial(key.I[i]);
      deg += key.I[i];
    }
    if (num == 0) continue;
    const KElem coeff = KElem::from_int(ring, num).divided(den);
    U = U + formal_lift(chart_scaled(A, coeff), deg, T);
  }
  return U;
}

CocycleLawReport verify_cocycle_law(const BaseConfig& cfg, const HiggsData& h,
                                    const std::vector<std::pair<GroupElt, GroupElt>>& pairs, int T) {
  validate_higgs(cfg, h);
  const OkElem alpha = twist_constant(cfg, h.twist);
  const Int m = cfg.ring->modulus();
  CocycleLawReport rep;
  for (const auto& [s, u] : pairs) {
    const FormalMatrix lhs = cocycle_matrix(cfg, h, group_compose(s, u, m), T);
    const FormalMatrix rhs = cocycle_matrix(cfg, h, s, T) * galois_act_t(s, cocycle_matrix(cfg, h, u, T), alpha);
    rep.residual.merge(formal_residual(lhs, rhs, "pair " + std::to_string(rep.pairs) + " "));
    ++rep.pairs;
  }
  rep.ok = rep.residual.zero();
  return rep;
}

ChartMatrix sen_operator(const BaseConfig& cfg, const HiggsData& h) {
  if (!h.has_phi()) throw Error(ErrorKind::ValidationFailure, "the Sen operator needs phi");
  return chart_scaled(h.phi, -KElem(twist_constant(cfg, h.twist)).inverse());
}

Residual sen_first_order(const BaseConfig& cfg, const HiggsData& h, const GroupElt& s) {
  const ChartCtx& ctx = *h.base;
  const OkRing& ring = *cfg.ring;
  ChartMatrix linear = chart_scaled(phi_or_zero(h), KElem::from_int(ring, h.has_phi() ? s.c : 0));
  for (int i = 0; i < h.d(); ++i) linear = linear + chart_scaled(h.theta[i], KElem::from_int(ring, s.n[i]));
  const FormalMatrix expected = formal_identity(ctx, h.rank, 2) + formal_lift(linear, 1, 2);
  return formal_residual(cocycle_matrix(cfg, h, s, 2), expected, "U");
}

PeriodKernel period_kernel(const HiggsData& h, int T, int Dy) {
  const ChartCtx& ctx = *h.base;
  const int d = h.d();
  PeriodKernel k{h.rank, d, T, Dy, &ctx, {}, {}};
  const std::vector<int> origin(d, 0);
  k.coeffs[origin] = formal_identity(ctx, h.rank, T);
  std::vector<FormalMatrix> t_theta;
  for (const auto& th : h.theta) t_theta.push_back(formal_lift(th, 1, T));

  // (J_i + 1) F_{J + E_i} = t Theta_i F_J, taking i as the first nonzero slot.
  for (int deg = 1; deg <= Dy; ++deg)
    for (const auto& J : indices_of_degree(d, deg)) {
      const int i = static_cast<int>(std::find_if(J.begin(), J.end(), [](int x) { return x > 0; }) - J.begin());
      std::vector<int> prev = J;
      --prev[i];
      k.coeffs[J] = formal_times(t_theta[i] * k.coeffs.at(prev), KElem::from_rational(ctx.ring(), 1, J[i]));
    }

  // Apply theta_H + sum_i d/dY_i with theta_H = -t Theta.
  for (const auto& [J, F] : k.coeffs) {
    if (static_cast<int>(std::accumulate(J.begin(), J.end(), 0)) >= Dy) continue;
    for (int i = 0; i < d; ++i) {
      std::vector<int> next = J;
      ++next[i];
      const FormalMatrix dF = formal_times(k.coeffs.at(next), KElem::from_int(ctx.ring(), next[i]));
      const FormalMatrix thetaF = -(t_theta[i] * F);
      std::string label = "Y^[";
      for (int a = 0; a < d; ++a) label += (a ? "," : "") + std::to_string(J[a]);
      label += "] dir " + std::to_string(i) + " ";
      k.kernel_residual.merge(formal_residual(dF, -thetaF, label));
    }
  }

  for (const auto& J : indices_of_degree(d, Dy)) {
    const FormalMatrix& top = k.coeffs.at(J);
    for (const auto& x : top.data())
      if (!x.is_zero())
        throw Error(ErrorKind::KernelRankDeficit,
                    "kernel basis does not close up below Y-degree " + std::to_string(Dy) + " at t-order " +
                        std::to_string(T));
    k.coeffs.erase(J);
  }
  return k;
}

PeriodAction period_action(const BaseConfig& cfg, const PeriodKernel& k, const GroupElt& s) {
  const OkRing& ring = *cfg.ring;
  const Int m = ring.modulus();
  if (zp::mod(s.c, m) != 0) throw Error(ErrorKind::BadIndex, "the period kernel action is only modeled for c = 0");
  if (static_cast<int>(s.n.size()) != k.d) throw Error(ErrorKind::BadIndex, "group element and kernel differ in d");
  const Int chi_inv = zp::inverse(zp::mod(s.chi, m), cfg.p, m);
  const GroupElt scale_t{std::vector<Int>(k.d, 0), 0, s.chi};

  std::map<std::vector<int>, FormalMatrix> image;
  for (const auto& [J, F] : k.coeffs) image[J] = formal_zero(*k.base, k.rank, k.T);
  for (const auto& [J, F] : k.coeffs) {
    const int deg = static_cast<int>(std::accumulate(J.begin(), J.end(), 0));
    const FormalMatrix FJ = formal_times(galois_act_t(scale_t, F, cfg.beta),
                                         KElem::from_int(ring, zp::pow(chi_inv, static_cast<std::uint64_t>(deg), m)));
    // prod_i (Y_i + n_i)^{J_i} = sum_{K <= J} prod_i C(J_i, K_i) n_i^{J_i - K_i} Y^K
    for (auto& [K, G] : image) {
      Int coeff = 1;
      for (int i = 0; i < k.d && coeff != 0; ++i) {
        if (K[i] > J[i]) coeff = 0;
        else
          coeff = zp::mul(coeff, zp::mul(binomial(J[i], K[i]) % m, zp::pow(zp::mod(s.n[i], m), J[i] - K[i], m), m), m);
      }
      if (coeff != 0) G = G + formal_times(FJ, KElem::from_int(ring, coeff));
    }
  }

  PeriodAction act;
  act.matrix = image.at(std::vector<int>(k.d, 0));
  for (const auto& [K, G] : image) act.residual.merge(formal_residual(G, k.coeffs.at(K) * act.matrix, "action "));
  return act;
}

FormalMatrix galois_factor(const BaseConfig& cfg, const HiggsData& h, Int c, int T) {
  const ChartCtx& ctx = *h.base;
  const OkRing& ring = *cfg.ring;
  const KElem alpha(twist_constant(cfg, h.twist));
  const ChartMatrix S = chart_scaled(phi_or_zero(h), alpha.inverse());
  // L = S * sum_{k >= 1} (c alpha t)^k / k = -S log(1 - c alpha t)
  FormalMatrix L = formal_zero(ctx, h.rank, T);
  const KElem ca = alpha * KElem::from_int(ring, c);
  KElem power = ca;
  for (int k = 1; k < T; ++k) {
    L = L + formal_lift(chart_scaled(S, power.divided(k)), k, T);
    power = power * ca;
  }
  FormalMatrix result = formal_identity(ctx, h.rank, T);
  FormalMatrix term = result;
  for (int j = 1; j < T; ++j) {
    term = formal_times(term * L, KElem::from_rational(ring, 1, j));
    result = result + term;
  }
  return result;
}

CrosscheckReport crosscheck_inverse_simpson(const BaseConfig& cfg, const HiggsData& h,
                                            const std::vector<GroupElt>& samples, int T, int Dy) {
  validate_higgs(cfg, h);
  const PeriodKernel kernel = period_kernel(h, T, Dy);
  CrosscheckReport rep;
  rep.kernel_residual = kernel.kernel_residual;
  for (const auto& s : samples) {
    const GroupElt geo{s.n, 0, 1};
    const PeriodAction act = period_action(cfg, kernel, geo);
    rep.kernel_residual.merge(act.residual);
    const FormalMatrix rhs = act.matrix * galois_factor(cfg, h, s.c, T);
    rep.residual.merge(formal_residual(cocycle_matrix(cfg, h, s, T), rhs, "sample " + std::to_string(rep.samples) + " "));
    ++rep.samples;
  }
  rep.ok = rep.residual.zero() && rep.kernel_residual.zero();
  return rep;
}

FScalings f_scalings(const BaseConfig& cfg, const HiggsData& h, int T) {
  if (h.flavor != HiggsFlavor::AbsGeom) throw Error(ErrorKind::ValidationFailure, "scalings need abs-geom data");
  FScalings f;
  f.f3_theta = h.theta;
  f.f3_phi = sen_operator(cfg, h);
  for (const auto& th : h.theta) f.f1_theta.push_back(formal_lift(chart_scaled(th, KElem::from_int(*cfg.ring, -1)), 1, T));
  f.f1_exponent = f.f3_phi;
  return f;
}

H0Report h0_fixed_points(const BaseConfig& cfg, const HiggsData& h, int T) {
  if (!h.has_phi()) throw Error(ErrorKind::ValidationFailure, "fixed points need an absolute flavor");
  const Stratification strat = stratification_closed_form(cfg, h, T - 1);
  // U(s) - I = sum A_{n,I} c^n n^I t^{n+|I|} / (n! I!) vanishes on v for generic
  // (n, c, t) exactly when every A_{n,I} with (n, I) != 0 kills v.
  std::vector<KMatrix> all, expected{to_k_matrix(h.phi)};
  for (const auto& [key, A] : strat.coeffs)
    if (key.n + std::accumulate(key.I.begin(), key.I.end(), 0) > 0) all.push_back(to_k_matrix(A));
  for (const auto& th : h.theta) expected.push_back(to_k_matrix(th));
  const KMatrix big = vstack(all), small = vstack(expected);

  H0Report rep;
  rep.fixed = kernel_basis(big);
  rep.expected = kernel_basis(small);
  auto kills = [](const KMatrix& m, const std::vector<KElem>& v) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      KElem acc = KElem::zero(v[0].ring());
      for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
      if (!acc.is_zero()) return false;
    }
    return true;
  };
  rep.agrees = rep.fixed.size() == rep.expected.size();
  for (const auto& v : rep.fixed) rep.agrees = rep.agrees && kills(small, v);
  for (const auto& v : rep.expected) rep.agrees = rep.agrees && kills(big, v);
  return rep;
}

}  // namespace htlab
