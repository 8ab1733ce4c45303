#include "htlab/pd.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace htlab {

const char* to_string(PdVariant v) {
  switch (v) {
    case PdVariant::AbsArith: return "abs-arith";
    case PdVariant::AbsGeom: return "abs-geom";
    case PdVariant::RelGeom: return "rel-geom";
  }
  return "unknown";
}

int PdShape::x_slot(int j) const {
  if (!has_x() || j < 1 || j > n) throw Error(ErrorKind::BadIndex, "X_" + std::to_string(j) + " not in this ring");
  return j - 1;
}

int PdShape::y_slot(int k, int j) const {
  if (!has_y() || k < 1 || k > d || j < 1 || j > n)
    throw Error(ErrorKind::BadIndex, "Y_{" + std::to_string(k) + "," + std::to_string(j) + "} not in this ring");
  return x_count() + (k - 1) * n + (j - 1);
}

std::string PdShape::slot_name(int slot) const {
  if (slot < x_count()) return "X" + std::to_string(slot + 1);
  const int rest = slot - x_count();
  return "Y" + std::to_string(rest / n + 1) + "," + std::to_string(rest % n + 1);
}

// ---------------------------------------------------------------- basis

namespace {

std::uint64_t pack(const PdIndex& m) {
  std::uint64_t key = 0;
  for (int v = 0; v < kMaxPdVars; ++v) key |= static_cast<std::uint64_t>(m[v] & 0xF) << (4 * v);
  return key;
}

void enumerate(int nv, int remaining, int pos, PdIndex& cur, std::vector<PdIndex>& out) {
  if (pos == nv) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur[pos] = static_cast<std::uint8_t>(a);
    enumerate(nv, remaining - a, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

Int binomial(int n, int k) {
  Int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string mono_name(const PdShape& shape, const PdIndex& m) {
  std::string s;
  for (int v = 0; v < shape.num_vars(); ++v) {
    if (m[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += shape.slot_name(v);
    if (m[v] > 1) s += "^[" + std::to_string(m[v]) + "]";
  }
  return s.empty() ? "1" : s;
}

}  // namespace

PdBasis::PdBasis(int nv, int D) : nv_(nv), D_(D) {
  PdIndex cur{};
  for (int g = 0; g <= D; ++g) {
    start_.push_back(monos_.size());
    enumerate(nv, g, 0, cur, monos_);
    if (nv == 0) break;
  }
  while (static_cast<int>(start_.size()) <= D) start_.push_back(monos_.size());
  start_.push_back(monos_.size());
  degree_.resize(monos_.size());
  for (std::size_t k = 0; k < monos_.size(); ++k) {
    int deg = 0;
    for (int v = 0; v < nv; ++v) deg += monos_[k][v];
    degree_[k] = deg;
    lookup_.emplace(pack(monos_[k]), static_cast<int>(k));
  }
}

const PdBasis& PdBasis::get(int nv, int D) {
  static std::mutex lock;
  static std::map<std::pair<int, int>, std::unique_ptr<PdBasis>> registry;
  if (nv < 0 || nv > kMaxPdVars) throw Error(ErrorKind::BadIndex, "too many pd variables: " + std::to_string(nv));
  if (D < 0 || D > 15) throw Error(ErrorKind::BadIndex, "pd cutoff out of range");
  std::lock_guard guard(lock);
  auto it = registry.find({nv, D});
  if (it == registry.end()) it = registry.emplace(std::make_pair(nv, D), std::unique_ptr<PdBasis>(new PdBasis(nv, D))).first;
  return *it->second;
}

int PdBasis::position(const PdIndex& m) const {
  int deg = 0;
  for (int v = 0; v < kMaxPdVars; ++v) {
    if (v >= nv_ && m[v] != 0) return -1;
    deg += m[v];
  }
  if (deg > D_) return -1;
  auto it = lookup_.find(pack(m));
  return it == lookup_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------- elements

PdElement::PdElement(const PdShape& shape, const ChartCtx& ctx)
    : shape_(shape), basis_(&PdBasis::get(shape.num_vars(), shape.D)), ctx_(&ctx), coeffs_(basis_->size(), ChartElem(ctx)) {}

PdElement PdElement::constant(const PdShape& shape, const ChartElem& c) {
  PdElement r(shape, c.ctx());
  r.coeffs_[0] = c;
  return r;
}

PdElement PdElement::variable(const PdShape& shape, const ChartCtx& ctx, int slot) {
  PdIndex a{};
  a[slot] = 1;
  return monomial(shape, a, ChartElem(ctx, 1));
}

PdElement PdElement::monomial(const PdShape& shape, const PdIndex& a, const ChartElem& c) {
  PdElement r(shape, c.ctx());
  const int pos = r.basis_->position(a);
  if (pos < 0)
    r.truncated_ = true;
  else
    r.coeffs_[pos] = c;
  return r;
}

ChartElem PdElement::coeff_of(const PdIndex& a) const {
  const int pos = basis_->position(a);
  return pos < 0 ? ChartElem(*ctx_) : coeffs_[pos];
}

bool PdElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

bool PdElement::is_integral() const {
  for (const auto& c : coeffs_)
    if (!c.is_integral()) return false;
  return true;
}

int PdElement::top_degree() const {
  for (std::size_t k = coeffs_.size(); k-- > 0;)
    if (!coeffs_[k].is_exact_zero()) return basis_->degree(k);
  return -1;
}

PdElement PdElement::operator-() const {
  PdElement r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

PdElement& PdElement::operator+=(const PdElement& b) {
  if (!(shape_ == b.shape_)) throw Error(ErrorKind::BadIndex, "pd elements of different shapes");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += b.coeffs_[k];
  truncated_ = truncated_ || b.truncated_;
  return *this;
}

PdElement operator+(const PdElement& a, const PdElement& b) {
  PdElement r = a;
  r += b;
  return r;
}

PdElement operator-(const PdElement& a, const PdElement& b) {
  PdElement r = a;
  r -= b;
  return r;
}

PdElement PdElement::times(const ChartElem& s) const {
  PdElement r = *this;
  for (auto& c : r.coeffs_) c = c * s;
  return r;
}

void PdElement::add_scaled(const PdElement& b, const ChartElem& s) {
  if (!(shape_ == b.shape_)) throw Error(ErrorKind::BadIndex, "pd elements of different shapes");
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (!b.coeffs_[k].is_exact_zero()) coeffs_[k] += b.coeffs_[k] * s;
  truncated_ = truncated_ || b.truncated_;
}

std::string PdElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coeffs_[k].to_string() << ")*" << mono_name(shape_, basis_->mono(k));
  }
  if (first) os << "0";
  return os.str();
}

PdElement pd_mul(const PdElement& a, const PdElement& b) {
  if (!(a.shape() == b.shape())) throw Error(ErrorKind::BadIndex, "pd elements of different shapes");
  const PdBasis& basis = a.basis();
  const int D = basis.cutoff();
  const int nv = basis.num_vars();
  PdElement r(a.shape(), a.ctx());
  if (a.truncated() || b.truncated()) r.mark_truncated();
  const int ta = a.top_degree(), tb = b.top_degree();
  if (ta >= 0 && tb >= 0 && ta + tb > D) r.mark_truncated();

  std::vector<std::size_t> bnz;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!b.coeff(j).is_exact_zero()) bnz.push_back(j);

  for (std::size_t i = 0; i < a.size(); ++i) {
    const ChartElem& ca = a.coeff(i);
    if (ca.is_exact_zero()) continue;
    const PdIndex& ma = basis.mono(i);
    const int room = D - basis.degree(i);
    for (std::size_t j : bnz) {
      if (basis.degree(j) > room) break;
      const PdIndex& mb = basis.mono(j);
      PdIndex sum{};
      Int mult = 1;
      for (int v = 0; v < nv; ++v) {
        sum[v] = static_cast<std::uint8_t>(ma[v] + mb[v]);
        if (ma[v] && mb[v]) mult *= binomial(sum[v], ma[v]);
      }
      const int pos = basis.position(sum);
      ChartElem term = ca * b.coeff(j);
      r.coeff(pos) += mult == 1 ? term : term.scaled(mult);
    }
  }
  return r;
}

PdElement pd_divided_power(const PdElement& z, int n) {
  if (n < 0) throw Error(ErrorKind::BadIndex, "negative divided power");
  if (!z.coeff(0).is_zero()) throw Error(ErrorKind::BadIndex, "divided power of an element with constant term");
  PdElement r = PdElement::constant(z.shape(), ChartElem(z.ctx(), 1));
  if (n == 0) return r;
  for (int k = 0; k < n; ++k) r = pd_mul(r, z);
  Int fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  for (std::size_t k = 0; k < r.size(); ++k) r.coeff(k) = r.coeff(k).divided(fact);
  if (z.is_integral() && !r.is_integral())
    throw Error(ErrorKind::IntegralityFailure, "gamma_" + std::to_string(n) + " of an integral element");
  return r;
}

Residual pd_residual(const PdElement& a, const PdElement& b) {
  Residual res;
  const PdElement diff = a - b;
  for (std::size_t k = 0; k < diff.size(); ++k) {
    const auto v = diff.coeff(k).valuation();
    if (v) res.record(*v, mono_name(diff.shape(), diff.basis().mono(k)));
  }
  return res;
}

// ---------------------------------------------------------------- faces

FaceMap::FaceMap(int i, const PdShape& source, const ChartCtx& ctx, const FaceParams& params)
    : i_(i), source_(source), target_(source.with_degree(source.n + 1)), ctx_(&ctx) {
  if (i < 0 || i > source.n + 1)
    throw Error(ErrorKind::BadIndex, "face index " + std::to_string(i) + " out of range for degree " + std::to_string(source.n));
  if (target_.num_vars() > kMaxPdVars) throw Error(ErrorKind::BadIndex, "target degree has too many variables");
  const int n = source.n;
  // (1 - alpha X_1)^{-1} = sum_k alpha^k k! X_1^[k].
  PdElement geom(target_, ctx);
  if (i == 0 && target_.has_x()) {
    KElem coeff = KElem::one(ctx.ring());
    const KElem alpha(params.alpha);
    for (int k = 0; k <= target_.D; ++k) {
      PdIndex a{};
      a[target_.x_slot(1)] = static_cast<std::uint8_t>(k);
      geom += PdElement::monomial(target_, a, ChartElem(ctx, coeff));
      coeff = coeff * alpha.scaled(k + 1);
    }
  }
  auto shifted = [&](int j) { return (i == 0 || j >= i) ? j + 1 : j; };

  gen_images_.resize(source.num_vars());
  for (int j = 1; j <= source.x_count(); ++j) {
    PdElement img = PdElement::x(target_, ctx, shifted(j));
    if (i == 0) img = pd_mul(img - PdElement::x(target_, ctx, 1), geom);
    gen_images_[source.x_slot(j)] = img;
  }
  if (source.has_y())
    for (int k = 1; k <= source.d; ++k)
      for (int j = 1; j <= n; ++j) {
        PdElement img = PdElement::y(target_, ctx, k, shifted(j));
        if (i == 0) {
          img = img - PdElement::y(target_, ctx, k, 1);
          if (source.variant == PdVariant::AbsGeom) img = pd_mul(img, geom);
        }
        gen_images_[source.y_slot(k, j)] = img;
      }
  if (i > 0) {
    relabel_.resize(source.num_vars());
    for (int j = 1; j <= source.x_count(); ++j) relabel_[source.x_slot(j)] = target_.x_slot(shifted(j));
    if (source.has_y())
      for (int k = 1; k <= source.d; ++k)
        for (int j = 1; j <= n; ++j) relabel_[source.y_slot(k, j)] = target_.y_slot(k, shifted(j));
  }
  gen_powers_.resize(source.num_vars());
  const PdBasis& sb = PdBasis::get(source.num_vars(), source.D);
  mono_images_.resize(sb.size());
  mono_ready_.assign(sb.size(), false);
}

const PdElement& FaceMap::monomial_image(std::size_t k) const {
  if (mono_ready_[k]) return mono_images_[k];
  const PdBasis& sb = PdBasis::get(source_.num_vars(), source_.D);
  const PdIndex& a = sb.mono(k);
  const ChartElem one(*ctx_, 1);
  PdElement img;
  if (i_ > 0) {
    // Pure relabelling of variables.
    PdIndex b{};
    for (int v = 0; v < source_.num_vars(); ++v)
      if (a[v]) b[relabel_[v]] = a[v];
    img = PdElement::monomial(target_, b, one);
  } else {
    img = PdElement::constant(target_, one);
    for (int v = 0; v < source_.num_vars(); ++v) {
      if (a[v] == 0) continue;
      auto& powers = gen_powers_[v];
      while (static_cast<int>(powers.size()) <= a[v])
        powers.push_back(pd_divided_power(gen_images_[v], static_cast<int>(powers.size())));
      img = pd_mul(img, powers[a[v]]);
    }
  }
  mono_images_[k] = std::move(img);
  mono_ready_[k] = true;
  return mono_images_[k];
}

PdElement FaceMap::apply(const PdElement& x) const {
  if (!(x.shape() == source_)) throw Error(ErrorKind::BadIndex, "face map applied to an element of the wrong shape");
  PdElement r(target_, *ctx_);
  if (x.truncated()) r.mark_truncated();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x.coeff(k).is_exact_zero()) continue;
    r.add_scaled(monomial_image(k), x.coeff(k));
  }
  return r;
}

PdElement face_map(int i, const PdElement& x, const FaceParams& params) {
  return FaceMap(i, x.shape(), x.ctx(), params).apply(x);
}

CosimplicialReport check_cosimplicial_identities(const FaceParams& params, PdVariant variant, int d, int max_degree,
                                                 int D, const ChartCtx& ctx) {
  CosimplicialReport report;
  for (int m = 1; m <= max_degree; ++m) {
    const PdShape s0{variant, m, d, D};
    const PdShape s1 = s0.with_degree(m + 1);
    std::vector<FaceMap> lower, upper;
    for (int i = 0; i <= m + 1; ++i) lower.emplace_back(i, s0, ctx, params);
    for (int i = 0; i <= m + 2; ++i) upper.emplace_back(i, s1, ctx, params);
    for (int slot = 0; slot < s0.num_vars(); ++slot) {
      const PdElement g = PdElement::variable(s0, ctx, slot);
      for (int j = 1; j <= m + 2; ++j)
        for (int i = 0; i < j; ++i) {
          const PdElement lhs = upper[j].apply(lower[i].apply(g));
          const PdElement rhs = upper[i].apply(lower[j - 1].apply(g));
          CosimplicialEntry e{i, j, m, s0.slot_name(slot), pd_residual(lhs, rhs)};
          if (!e.residual.zero()) report.ok = false;
          report.entries.push_back(std::move(e));
        }
    }
  }
  return report;
}

FormalC evaluate_at_group(const PdElement& x, const std::vector<GroupElt>& sigmas, int T) {
  const PdShape& shape = x.shape();
  if (static_cast<int>(sigmas.size()) != shape.n)
    throw Error(ErrorKind::BadIndex, "expected " + std::to_string(shape.n) + " group elements");
  const OkRing& ring = x.ctx().ring();
  const Int modulus = ring.modulus();

  std::vector<GroupElt> prefix;
  GroupElt acc = group_identity(shape.has_y() ? shape.d : static_cast<int>(sigmas[0].n.size()));
  for (const auto& s : sigmas) {
    if (shape.has_y() && static_cast<int>(s.n.size()) != shape.d)
      throw Error(ErrorKind::BadIndex, "group element has the wrong number of geometric exponents");
    acc = group_compose(acc, shape.has_y() ? s : GroupElt{acc.n, s.c, s.chi}, modulus);
    prefix.push_back(acc);
  }
  std::vector<KElem> value(shape.num_vars());
  for (int j = 1; j <= shape.x_count(); ++j) value[shape.x_slot(j)] = KElem::from_int(ring, prefix[j - 1].c);
  if (shape.has_y())
    for (int k = 1; k <= shape.d; ++k)
      for (int j = 1; j <= shape.n; ++j) value[shape.y_slot(k, j)] = KElem::from_int(ring, prefix[j - 1].n[k - 1]);

  // powers[v][m] = value_v^m / m!
  std::vector<std::vector<KElem>> powers(shape.num_vars());
  for (int v = 0; v < shape.num_vars(); ++v) {
    powers[v].push_back(KElem::one(ring));
    for (int m = 1; m <= shape.D; ++m) powers[v].push_back((powers[v].back() * value[v]).divided(m));
  }

  FormalC out(x.ctx(), T);
  const PdBasis& basis = x.basis();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int deg = basis.degree(k);
    if (deg >= T) continue;
    if (x.coeff(k).is_exact_zero()) continue;
    KElem w = KElem::one(ring);
    const PdIndex& a = basis.mono(k);
    for (int v = 0; v < shape.num_vars(); ++v)
      if (a[v]) w = w * powers[v][a[v]];
    out.coeff(deg) += x.coeff(k).times(w);
  }
  return out;
}

}  // namespace htlab
