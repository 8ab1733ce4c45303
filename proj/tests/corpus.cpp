#include "corpus.hpp"

#include <algorithm>
#include <set>

#include "gen.hpp"

namespace testgen {

BaseConfig random_base(std::mt19937_64& rng, int N, int max_e) {
  static const Int primes[] = {2, 3, 5};
  const Int p = primes[uniform(rng, 0, 2)];
  std::vector<std::vector<Int>> choices;
  for (auto& E : eisenstein_choices(p))
    if (static_cast<int>(E.size()) - 1 <= max_e) choices.push_back(E);
  const auto& E = choices[uniform(rng, 0, static_cast<Int>(choices.size()) - 1)];
  return make_base_config(p, E, 1, N);
}

ChartElem random_chart(std::mt19937_64& rng, const ChartCtx& ctx, bool small) {
  const OkRing& ring = ctx.ring();
  ChartElem x(ctx, KElem(small ? OkElem::from_int(ring, uniform(rng, -9, 9)) : random_ok(rng, ring)));
  if (ctx.is_point()) return x;
  const int terms = static_cast<int>(uniform(rng, 0, 2));
  for (int t = 0; t < terms; ++t) {
    Mono m{};
    const int v = static_cast<int>(uniform(rng, 0, ctx.num_vars() - 1));
    const bool laurent = v > ctx.r();
    m[v] = static_cast<std::int8_t>(laurent && uniform(rng, 0, 1) ? -1 : 1);
    x += ChartElem::monomial(ctx, m, KElem::from_int(ring, uniform(rng, -9, 9)));
  }
  return x;
}

namespace {

// Conjugates every matrix by a product of elementary integer matrices.
void conjugate(std::mt19937_64& rng, HiggsData& h) {
  const int l = h.rank;
  if (l < 2) return;
  const ChartCtx& ctx = *h.base;
  for (int step = 0; step < 3; ++step) {
    const int i = static_cast<int>(uniform(rng, 0, l - 1));
    int j = static_cast<int>(uniform(rng, 0, l - 2));
    if (j >= i) ++j;
    const Int c = uniform(rng, -3, 3);
    ChartMatrix U = chart_identity(ctx, l), Uinv = chart_identity(ctx, l);
    U(i, j) = ChartElem(ctx, c);
    Uinv(i, j) = ChartElem(ctx, -c);
    for (auto& t : h.theta) t = U * t * Uinv;
    if (h.has_phi()) h.phi = U * h.phi * Uinv;
  }
}

}  // namespace

HiggsData random_higgs(std::mt19937_64& rng, const BaseConfig& cfg, const HiggsShape& shape) {
  const OkRing& ring = *cfg.ring;
  const ChartCtx& ctx =
      shape.chart ? ChartCtx::get(ring, static_cast<int>(uniform(rng, 1, 2)), 0, cfg.cutoffs.Dy) : ChartCtx::point(ring);
  const int l = shape.rank;
  const int d = shape.flavor == HiggsFlavor::AbsArith ? 0 : shape.d;
  HiggsData h = zero_higgs(shape.flavor, l, d, ctx, shape.twist);
  h.integral = !shape.rational;
  const KElem alpha(twist_constant(cfg, shape.twist));
  const KElem pi(cfg.pi());

  if (shape.flavor == HiggsFlavor::AbsArith) {
    // Any A with entries divisible by pi converges.
    for (auto& x : h.phi.data()) x = random_chart(rng, ctx, false).times(pi);
    conjugate(rng, h);
    return h;
  }

  const int chains = static_cast<int>(uniform(rng, 1, std::max(1, l - 1)));
  const int levels = static_cast<int>(uniform(rng, 1, 3));
  std::vector<int> chain(l), level(l);
  for (int j = 0; j < l; ++j) {
    chain[j] = static_cast<int>(uniform(rng, 0, chains - 1));
    level[j] = static_cast<int>(uniform(rng, 0, levels - 1));
  }
  if (l >= 2 && levels >= 2) {
    // Make sure at least one Theta entry is possible.
    chain[1] = chain[0];
    level[1] = level[0] + 1 < levels ? level[0] + 1 : level[0] - 1;
  }
  std::vector<ChartElem> base(chains);
  for (auto& b : base) b = random_chart(rng, ctx, false).times(pi);
  if (h.has_phi())
    for (int j = 0; j < l; ++j) h.phi(j, j) = base[chain[j]] + ChartElem(ctx, alpha.scaled(level[j]));

  const KElem scale = shape.rational ? KElem::from_rational(ring, 1, cfg.p) : KElem::one(ring);
  for (int i = 0; i < d; ++i) {
    if (i > 0 && levels > 2) {
      h.theta[i] = chart_scaled(h.theta[0], KElem::from_int(ring, uniform(rng, -4, 4)));
      continue;
    }
    for (int j = 0; j < l; ++j)
      for (int k = 0; k < l; ++k)
        if (chain[j] == chain[k] && level[k] == level[j] + 1) h.theta[i](j, k) = random_chart(rng, ctx, true).times(scale);
  }
  conjugate(rng, h);
  return h;
}

std::vector<CorpusItem> higgs_corpus(std::uint64_t seed, int count, int max_rank, int max_d, int N) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusItem> out;
  for (int k = 0; k < count; ++k) {
    CorpusItem item{random_base(rng, N), {}, {}};
    HiggsShape shape;
    shape.rank = static_cast<int>(uniform(rng, 1, max_rank));
    shape.d = static_cast<int>(uniform(rng, 1, max_d));
    shape.chart = k % 5 == 3;
    shape.rational = k % 7 == 5;
    item.h = random_higgs(rng, item.cfg, shape);
    item.label = "#" + std::to_string(k) + " p=" + std::to_string(item.cfg.p) + " e=" + std::to_string(item.cfg.e()) +
                 " l=" + std::to_string(shape.rank) + " d=" + std::to_string(shape.d) + (shape.chart ? " chart" : "") +
                 (shape.rational ? " rational" : "");
    out.push_back(std::move(item));
  }
  return out;
}

GroupElt random_group_elt(std::mt19937_64& rng, const BaseConfig& cfg, int d) {
  const Int m = cfg.ring->modulus();
  GroupElt s;
  for (int i = 0; i < d; ++i) s.n.push_back(uniform(rng, 0, m - 1));
  s.c = uniform(rng, 0, m - 1);
  for (;;) {
    s.chi = uniform(rng, 1, m - 1);
    if (s.chi % cfg.p != 0) break;
  }
  return s;
}

EnumeratedSizes enumerate_mod_p2(const OkMatrix& phi) {
  const OkRing& ring = phi(0, 0).ring();
  const Int p = ring.p();
  const int e = ring.e();
  const int m = 2 * e;  // p^2 O_K = pi^{2e} O_K
  const std::size_t l = phi.rows();
  std::vector<OkElem> elems;
  const Int q = p * p;
  Int count = 1;
  for (int i = 0; i < e; ++i) count *= q;
  for (Int code = 0; code < count; ++code) {
    std::vector<Int> c(e);
    Int rest = code;
    for (int i = 0; i < e; ++i) {
      c[i] = rest % q;
      rest /= q;
    }
    elems.push_back(OkElem::from_coeffs(ring, c));
  }
  EnumeratedSizes out;
  std::set<std::vector<Int>> image;
  std::vector<std::size_t> idx(l, 0);
  for (;;) {
    std::vector<Int> key;
    bool zero = true;
    for (std::size_t i = 0; i < l; ++i) {
      OkElem acc = OkElem::zero(ring);
      for (std::size_t j = 0; j < l; ++j) acc += phi(i, j) * elems[idx[j]];
      acc = acc.with_precision(m);
      zero = zero && acc.is_zero();
      for (int k = 0; k < e; ++k) key.push_back(acc.coeff(k));
    }
    if (zero) ++out.kernel;
    image.insert(key);
    std::size_t pos = 0;
    while (pos < l && ++idx[pos] == elems.size()) idx[pos++] = 0;
    if (pos == l) break;
  }
  Int total = 1;
  for (std::size_t i = 0; i < l; ++i) total *= count;
  out.cokernel = total / static_cast<Int>(image.size());
  return out;
}

}  // namespace testgen
