#include "htlab/witt.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace htlab {

namespace {

// Remainder of a by monic b over F_p (coefficients lowest first).
std::vector<Int> poly_rem_mod_p(std::vector<Int> a, const std::vector<Int>& b, Int p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const Int lead = zp::mod(a.back(), p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = zp::mod(a[shift + i] - lead * b[i], p);
    a.pop_back();
  }
  return a;
}

bool all_zero(const std::vector<Int>& a) {
  for (Int x : a)
    if (x != 0) return false;
  return true;
}

// Monic polynomial of degree `deg` with index `idx` read in base p.
std::vector<Int> monic_from_index(Int idx, int deg, Int p) {
  std::vector<Int> poly(deg + 1, 0);
  for (int i = 0; i < deg; ++i) {
    poly[i] = idx % p;
    idx /= p;
  }
  poly[deg] = 1;
  return poly;
}

bool irreducible_mod_p(const std::vector<Int>& poly, Int p) {
  const int f = static_cast<int>(poly.size()) - 1;
  for (int deg = 1; deg <= f / 2; ++deg) {
    Int count = 1;
    for (int i = 0; i < deg; ++i) count *= p;
    for (Int idx = 0; idx < count; ++idx)
      if (all_zero(poly_rem_mod_p(poly, monic_from_index(idx, deg, p), p))) return false;
  }
  return true;
}

std::vector<Int> smallest_irreducible(Int p, int f) {
  if (f == 1) return {0, 1};
  Int count = 1;
  for (int i = 0; i < f; ++i) count *= p;
  for (Int idx = 0; idx < count; ++idx) {
    auto poly = monic_from_index(idx, f, p);
    if (poly[0] != 0 && irreducible_mod_p(poly, p)) return poly;
  }
  throw Error(ErrorKind::NotPrime, "no irreducible polynomial found");
}

using WCoeffs = WittElem::Coeffs;

WCoeffs mul_raw(const WittRing& r, const WCoeffs& a, const WCoeffs& b) {
  const int f = r.f();
  const Int m = r.modulus();
  std::array<Int, 2 * kMaxResidueDegree> prod{};
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f; ++j) prod[i + j] = zp::mod(prod[i + j] + static_cast<Wide>(a[i]) * b[j], m);
  }
  const auto& poly = r.defining_polynomial();
  for (int k = 2 * f - 2; k >= f; --k) {
    if (prod[k] == 0) continue;
    for (int i = 0; i < f; ++i) prod[k - f + i] = zp::mod(prod[k - f + i] - static_cast<Wide>(prod[k]) * poly[i], m);
    prod[k] = 0;
  }
  WCoeffs out{};
  for (int i = 0; i < f; ++i) out[i] = prod[i];
  return out;
}

}  // namespace

WittRing::WittRing(Int p, int f, int precision) : p_(p), f_(f), n_(precision) {
  pow_p_.resize(n_ + 1);
  pow_p_[0] = 1;
  for (int i = 1; i <= n_; ++i) pow_p_[i] = pow_p_[i - 1] * p_;
  poly_ = smallest_irreducible(p, f);
}

void WittRing::init_frobenius() {
  frob_g_.assign(f_, {});
  if (f_ == 1) {
    frob_g_[0] = {};
    return;
  }
  const WittElem g = WittElem::generator(*this);
  auto eval = [&](const std::vector<Int>& poly, const WittElem& x) {
    WittElem acc = WittElem::zero(*this);
    for (std::size_t k = poly.size(); k-- > 0;) acc = acc * x + WittElem::from_int(*this, poly[k]);
    return acc;
  };
  std::vector<Int> deriv;
  for (std::size_t i = 1; i < poly_.size(); ++i) deriv.push_back(poly_[i] * static_cast<Int>(i));
  WittElem root = g.pow(static_cast<std::uint64_t>(p_));
  for (int known = 1; known < 2 * n_; known *= 2) root = root - eval(poly_, root) * eval(deriv, root).inverse();
  frob_g_[0] = g.c_;
  frob_g_[1] = root.c_;
  // phi^k(g) = phi(phi^{k-1}(g)) = sum_i c_i phi(g)^i.
  for (int k = 2; k < f_; ++k) {
    WittElem acc = WittElem::zero(*this);
    WittElem power = WittElem::one(*this);
    for (int i = 0; i < f_; ++i) {
      acc += power.scaled(frob_g_[k - 1][i]);
      power *= root;
    }
    frob_g_[k] = acc.c_;
  }
}

const WittRing& WittRing::get(Int p, int f, int precision) {
  static std::mutex lock;
  static std::map<std::tuple<Int, int, int>, std::unique_ptr<WittRing>> registry;
  if (!zp::is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p));
  if (f < 1 || f > kMaxResidueDegree)
    throw Error(ErrorKind::BadIndex, "residue degree " + std::to_string(f) + " unsupported");
  std::lock_guard guard(lock);
  auto key = std::make_tuple(p, f, precision);
  auto it = registry.find(key);
  if (it == registry.end()) {
    auto ring = std::unique_ptr<WittRing>(new WittRing(p, f, precision));
    ring->init_frobenius();
    it = registry.emplace(key, std::move(ring)).first;
  }
  return *it->second;
}

void WittElem::canonicalize() {
  if (!ring_) return;
  if (prec_ < 0) prec_ = 0;
  if (prec_ > ring_->N()) prec_ = ring_->N();
  const Int m = ring_->pow_p(prec_);
  for (int i = 0; i < kMaxResidueDegree; ++i) c_[i] = i < ring_->f() ? zp::mod(c_[i], m) : 0;
  if (ring_->f() > 0) frob_ = ((frob_ % ring_->f()) + ring_->f()) % ring_->f();
}

WittElem WittElem::from_int(const WittRing& ring, Int value) {
  Coeffs c{};
  c[0] = value;
  return WittElem(&ring, c, ring.N());
}

WittElem WittElem::from_coeffs(const WittRing& ring, std::span<const Int> coeffs) {
  Coeffs c{};
  for (std::size_t i = 0; i < coeffs.size() && i < static_cast<std::size_t>(ring.f()); ++i) c[i] = coeffs[i];
  return WittElem(&ring, c, ring.N());
}

WittElem WittElem::generator(const WittRing& ring) {
  Coeffs c{};
  if (ring.f() == 1)
    c[0] = 0;
  else
    c[1] = 1;
  return WittElem(&ring, c, ring.N());
}

bool WittElem::is_zero() const {
  for (Int c : c_)
    if (c != 0) return false;
  return true;
}

bool WittElem::is_unit() const {
  if (prec_ == 0) return false;
  for (int i = 0; i < ring_->f(); ++i)
    if (c_[i] % ring_->p() != 0) return true;
  return false;
}

int WittElem::valuation() const {
  int v = prec_;
  for (int i = 0; i < ring_->f(); ++i)
    if (c_[i] != 0) v = std::min(v, zp::valuation(c_[i], ring_->p(), prec_));
  return v;
}

Residue WittElem::residue() const {
  Residue r(ring_->f());
  for (int i = 0; i < ring_->f(); ++i) r[i] = zp::mod(c_[i], ring_->p());
  return r;
}

WittElem WittElem::operator-() const {
  Coeffs c{};
  for (int i = 0; i < ring_->f(); ++i) c[i] = -c_[i];
  return WittElem(ring_, c, prec_, frob_);
}

WittElem operator+(const WittElem& a, const WittElem& b) {
  WittElem::Coeffs c{};
  for (int i = 0; i < a.ring_->f(); ++i) c[i] = zp::mod(static_cast<Wide>(a.c_[i]) + b.c_[i], a.ring_->modulus());
  return WittElem(a.ring_, c, std::min(a.prec_, b.prec_), a.frob_);
}

WittElem operator-(const WittElem& a, const WittElem& b) {
  WittElem::Coeffs c{};
  for (int i = 0; i < a.ring_->f(); ++i) c[i] = zp::mod(static_cast<Wide>(a.c_[i]) - b.c_[i], a.ring_->modulus());
  return WittElem(a.ring_, c, std::min(a.prec_, b.prec_), a.frob_);
}

WittElem operator*(const WittElem& a, const WittElem& b) {
  return WittElem(a.ring_, mul_raw(*a.ring_, a.c_, b.c_), std::min(a.prec_, b.prec_), a.frob_);
}

WittElem WittElem::pow(std::uint64_t k) const {
  WittElem result = one(*ring_).with_precision(prec_);
  WittElem base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

WittElem WittElem::inverse() const {
  if (!is_unit()) throw Error(ErrorKind::NotAUnit, to_string());
  Int q = 1;
  for (int i = 0; i < ring_->f(); ++i) q *= ring_->p();
  const WittElem self(ring_, c_, ring_->N());
  WittElem inv = self.pow(static_cast<std::uint64_t>(q - 2));
  const WittElem two = from_int(*ring_, 2);
  for (int known = 1; known < ring_->N(); known *= 2) inv = inv * (two - self * inv);
  inv.frob_ = frob_;
  return inv.with_precision(prec_);
}

WittElem WittElem::div_p() const {
  if (prec_ < 1) throw Error(ErrorKind::PrecisionExhausted, "division by p with no digits");
  Coeffs c{};
  for (int i = 0; i < ring_->f(); ++i) {
    if (c_[i] % ring_->p() != 0) throw Error(ErrorKind::NotAUnit, "division by p of " + to_string());
    c[i] = c_[i] / ring_->p();
  }
  return WittElem(ring_, c, prec_ - 1, frob_);
}

WittElem WittElem::scaled(Int k) const {
  Coeffs c{};
  const Int m = ring_->modulus();
  for (int i = 0; i < ring_->f(); ++i) c[i] = zp::mul(c_[i], zp::mod(k, m), m);
  return WittElem(ring_, c, prec_, frob_);
}

WittElem WittElem::with_precision(int precision) const {
  return WittElem(ring_, c_, std::min(prec_, precision), frob_);
}

std::string WittElem::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < ring_->f(); ++i) os << (i ? ", " : "") << c_[i];
  os << "] + O(p^" << prec_ << ")";
  return os.str();
}

WittElem frobenius(const WittElem& x, int k) {
  const WittRing& r = x.ring();
  const int f = r.f();
  const int kk = ((k % f) + f) % f;
  if (kk == 0 || f == 1) {
    WittElem y = x;
    y.frob_ = ((x.frob_ + k) % f + f) % f;
    return y;
  }
  const WittElem image(&r, r.frob_g_[kk], r.N());
  WittElem acc = WittElem::zero(r);
  WittElem power = WittElem::one(r);
  for (int i = 0; i < f; ++i) {
    acc += power.scaled(x.c_[i]);
    power *= image;
  }
  return WittElem(&r, acc.c_, x.prec_, x.frob_ + k);
}

WittElem teichmuller(const WittRing& ring, const Residue& a) {
  WittElem x = WittElem::from_coeffs(ring, a);
  Int q = 1;
  for (int i = 0; i < ring.f(); ++i) q *= ring.p();
  for (int i = 0; i < ring.N(); ++i) x = x.pow(static_cast<std::uint64_t>(q));
  return x;
}

WittElem teichmuller(const WittRing& ring, Int a) { return teichmuller(ring, Residue{zp::mod(a, ring.p())}); }

}  // namespace htlab
