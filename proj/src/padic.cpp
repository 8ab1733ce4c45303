#include "htlab/padic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace htlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NotEisenstein: return "NotEisenstein";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::HorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::AxiomViolation: return "AxiomViolation";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::CommutationFailure: return "CommutationFailure";
    case ErrorKind::BraidFailure: return "BraidFailure";
    case ErrorKind::NilpotenceFailure: return "NilpotenceFailure";
    case ErrorKind::IntegralityFailure: return "IntegralityFailure";
    case ErrorKind::ClosedFormMismatch: return "ClosedFormMismatch";
    case ErrorKind::InvalidUnitCoefficient: return "InvalidUnitCoefficient";
    case ErrorKind::ValidationFailure: return "ValidationFailure";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::KernelRankDeficit: return "KernelRankDeficit";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace zp {

Int mod(Wide a, Int m) {
  Wide r = a % m;
  if (r < 0) r += m;
  return static_cast<Int>(r);
}

Int mul(Int a, Int b, Int m) { return mod(static_cast<Wide>(a) * b, m); }

Int pow(Int a, std::uint64_t e, Int m) {
  Int result = mod(1, m);
  Int base = mod(a, m);
  while (e > 0) {
    if (e & 1) result = mul(result, base, m);
    base = mul(base, base, m);
    e >>= 1;
  }
  return result;
}

Int inverse(Int a, Int p, Int m) {
  a = mod(a, m);
  if (a % p == 0) throw Error(ErrorKind::NotAUnit, std::to_string(a) + " is divisible by " + std::to_string(p));
  // Extended Euclid on (a, m).
  Wide r0 = m, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    Wide q = r0 / r1;
    std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
  }
  return mod(s0, m);
}

int valuation(Int a, Int p, int cap) {
  if (a == 0) return cap;
  int v = 0;
  while (a % p == 0 && v < cap) {
    a /= p;
    ++v;
  }
  return v;
}

bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace zp

namespace {

Int ceil_div(Int a, Int b) { return a <= 0 ? 0 : (a + b - 1) / b; }

}  // namespace

OkRing::OkRing(Int p, std::vector<Int> eisenstein, int precision)
    : p_(p), e_(static_cast<int>(eisenstein.size()) - 1), n_(precision), eis_(std::move(eisenstein)) {
  pow_p_.resize(n_ + 1);
  pow_p_[0] = 1;
  for (int i = 1; i <= n_; ++i) pow_p_[i] = pow_p_[i - 1] * p_;
  for (int i = 0; i < e_; ++i) red_[i] = zp::mod(-static_cast<Wide>(eis_[i]), modulus());
}

const OkRing& OkRing::get(Int p, std::span<const Int> eisenstein, int precision) {
  static std::mutex lock;
  static std::map<std::tuple<Int, std::vector<Int>, int>, std::unique_ptr<OkRing>> registry;

  if (!zp::is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p));
  std::vector<Int> eis(eisenstein.begin(), eisenstein.end());
  const int e = static_cast<int>(eis.size()) - 1;
  if (e < 1 || eis.back() != 1)
    throw Error(ErrorKind::NotEisenstein, "polynomial must be monic of degree >= 1");
  if (e > kMaxRamification)
    throw Error(ErrorKind::NotEisenstein, "degree " + std::to_string(e) + " exceeds supported ramification");
  for (int i = 0; i < e; ++i)
    if (eis[i] % p != 0)
      throw Error(ErrorKind::NotEisenstein, "coefficient of u^" + std::to_string(i) + " not divisible by p");
  if (eis[0] == 0 || (eis[0] / p) % p == 0)
    throw Error(ErrorKind::NotEisenstein, "constant term divisible by p^2");
  if (precision < 1) throw Error(ErrorKind::PrecisionExhausted, "precision must be positive");
  Wide bound = 1;
  for (int i = 0; i < precision + 1; ++i) {
    bound *= p;
    if (bound > (Wide(1) << 62)) throw Error(ErrorKind::PrecisionExhausted, "p^N exceeds the machine word budget");
  }

  std::lock_guard guard(lock);
  auto key = std::make_tuple(p, eis, precision);
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::unique_ptr<OkRing>(new OkRing(p, eis, precision))).first;
  return *it->second;
}

// ---------------------------------------------------------------- OkElem

namespace {

// Multiply two coefficient vectors and reduce modulo E and p^N.
OkElem::Coeffs mul_raw(const OkRing& r, const OkElem::Coeffs& a, const OkElem::Coeffs& b) {
  const int e = r.e();
  const Int m = r.modulus();
  std::array<Int, 2 * kMaxRamification> prod{};
  for (int i = 0; i < e; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < e; ++j) prod[i + j] = zp::mod(prod[i + j] + static_cast<Wide>(a[i]) * b[j], m);
  }
  for (int k = 2 * e - 2; k >= e; --k) {
    if (prod[k] == 0) continue;
    for (int i = 0; i < e; ++i)
      prod[k - e + i] = zp::mod(prod[k - e + i] + static_cast<Wide>(prod[k]) * r.reduction(i), m);
    prod[k] = 0;
  }
  OkElem::Coeffs out{};
  for (int i = 0; i < e; ++i) out[i] = prod[i];
  return out;
}

using Coeffs = OkElem::Coeffs;

}  // namespace

void OkElem::canonicalize() {
  if (!ring_) return;
  const int e = ring_->e();
  if (prec_ < 0) prec_ = 0;
  if (prec_ > ring_->full_precision()) prec_ = ring_->full_precision();
  for (int i = 0; i < kMaxRamification; ++i) {
    if (i >= e) {
      c_[i] = 0;
      continue;
    }
    const Int digits = ceil_div(prec_ - i, e);
    c_[i] = zp::mod(c_[i], ring_->pow_p(static_cast<int>(digits)));
  }
}

OkElem OkElem::from_int(const OkRing& ring, Int value) {
  Coeffs c{};
  c[0] = zp::mod(value, ring.modulus());
  return OkElem(&ring, c, ring.full_precision());
}

OkElem OkElem::from_coeffs(const OkRing& ring, std::span<const Int> coeffs) {
  return from_coeffs(ring, coeffs, ring.full_precision());
}

OkElem OkElem::from_coeffs(const OkRing& ring, std::span<const Int> coeffs, int precision) {
  // Horner evaluation at pi handles lists longer than e.
  Coeffs acc{};
  Coeffs pi_c{};
  if (ring.e() == 1)
    pi_c[0] = zp::mod(-static_cast<Wide>(ring.eisenstein()[0]), ring.modulus());
  else
    pi_c[1] = 1;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = mul_raw(ring, acc, pi_c);
    acc[0] = zp::mod(static_cast<Wide>(acc[0]) + coeffs[k], ring.modulus());
  }
  return OkElem(&ring, acc, precision);
}

OkElem OkElem::pi(const OkRing& ring) {
  const Int one = 1;
  const Int lst[2] = {0, one};
  return from_coeffs(ring, std::span<const Int>(lst, 2));
}

std::optional<int> OkElem::valuation() const {
  if (prec_ <= 0) throw Error(ErrorKind::PrecisionExhausted, "no pi-adic digits known");
  if (is_zero()) return std::nullopt;
  return valuation_capped();
}

int OkElem::valuation_capped() const {
  const int e = ring_->e();
  int best = prec_;
  for (int i = 0; i < e; ++i) {
    if (c_[i] == 0) continue;
    const int v = e * zp::valuation(c_[i], ring_->p(), ring_->N()) + i;
    if (v < best) best = v;
  }
  return best;
}

bool OkElem::is_zero() const {
  for (Int c : c_)
    if (c != 0) return false;
  return true;
}

bool OkElem::is_unit() const { return prec_ > 0 && c_[0] % ring_->p() != 0; }

OkElem OkElem::operator-() const {
  Coeffs c{};
  for (int i = 0; i < ring_->e(); ++i) c[i] = zp::mod(-static_cast<Wide>(c_[i]), ring_->modulus());
  return OkElem(ring_, c, prec_);
}

OkElem operator+(const OkElem& a, const OkElem& b) {
  Coeffs c{};
  const Int m = a.ring_->modulus();
  for (int i = 0; i < a.ring_->e(); ++i) c[i] = zp::mod(static_cast<Wide>(a.c_[i]) + b.c_[i], m);
  return OkElem(a.ring_, c, std::min(a.prec_, b.prec_));
}

OkElem operator-(const OkElem& a, const OkElem& b) {
  Coeffs c{};
  const Int m = a.ring_->modulus();
  for (int i = 0; i < a.ring_->e(); ++i) c[i] = zp::mod(static_cast<Wide>(a.c_[i]) - b.c_[i], m);
  return OkElem(a.ring_, c, std::min(a.prec_, b.prec_));
}

OkElem operator*(const OkElem& a, const OkElem& b) {
  return OkElem(a.ring_, mul_raw(*a.ring_, a.c_, b.c_), std::min(a.prec_, b.prec_));
}

OkElem OkElem::scaled(Int k) const {
  Coeffs c{};
  const Int m = ring_->modulus();
  const Int km = zp::mod(k, m);
  for (int i = 0; i < ring_->e(); ++i) c[i] = zp::mul(c_[i], km, m);
  return OkElem(ring_, c, prec_);
}

OkElem OkElem::inverse() const {
  if (!is_unit()) throw Error(ErrorKind::NotAUnit, to_string());
  const Int p = ring_->p();
  Coeffs y{};
  y[0] = zp::inverse(c_[0], p, p);
  OkElem inv(ring_, y, ring_->full_precision());
  const OkElem self(ring_, c_, ring_->full_precision());
  const OkElem two = from_int(*ring_, 2);
  // Newton iteration doubles the number of correct digits each step.
  for (int known = 1; known < ring_->full_precision(); known *= 2) inv = inv * (two - self * inv);
  return inv.with_precision(prec_);
}

OkElem OkElem::div_p() const {
  if (prec_ < ring_->e()) throw Error(ErrorKind::PrecisionExhausted, "division by p with fewer than e digits");
  Coeffs c{};
  for (int i = 0; i < ring_->e(); ++i) {
    if (c_[i] % ring_->p() != 0) throw Error(ErrorKind::NotAUnit, "division by p of " + to_string());
    c[i] = c_[i] / ring_->p();
  }
  return OkElem(ring_, c, prec_ - ring_->e());
}

OkElem OkElem::div_pi(int k) const {
  if (k <= 0) return *this;
  if (prec_ < k) throw Error(ErrorKind::PrecisionExhausted, "division by pi^" + std::to_string(k));
  const int e = ring_->e();
  if (e == 1) {
    OkElem r = *this;
    for (int i = 0; i < k; ++i) r = r.div_p();
    return r;
  }
  // p / pi = -pi^{e-1} * B(pi)^{-1} where E(u) = u^e + p B(u).
  static thread_local const OkRing* cached_ring = nullptr;
  static thread_local OkElem p_over_pi;
  if (cached_ring != ring_) {
    std::vector<Int> b(e);
    for (int i = 0; i < e; ++i) b[i] = ring_->eisenstein()[i] / ring_->p();
    OkElem binv = from_coeffs(*ring_, b).inverse();
    Coeffs pe{};
    pe[e - 1] = 1;
    p_over_pi = -(OkElem(ring_, pe, ring_->full_precision()) * binv);
    cached_ring = ring_;
  }
  OkElem r = *this;
  for (int step = 0; step < k; ++step) {
    if (r.c_[0] % ring_->p() != 0) throw Error(ErrorKind::NotAUnit, "division by pi of " + to_string());
    Coeffs shifted{};
    for (int i = 1; i < e; ++i) shifted[i - 1] = r.c_[i];
    Coeffs head{};
    head[0] = r.c_[0] / ring_->p();
    Coeffs sum = mul_raw(*ring_, head, p_over_pi.c_);
    for (int i = 0; i < e; ++i) sum[i] = zp::mod(static_cast<Wide>(sum[i]) + shifted[i], ring_->modulus());
    r = OkElem(ring_, sum, r.prec_ - 1);
  }
  return r;
}

OkElem OkElem::mul_p(int k) const {
  Coeffs c{};
  const Int m = ring_->modulus();
  const Int pk = k >= ring_->N() ? 0 : ring_->pow_p(k);
  for (int i = 0; i < ring_->e(); ++i) c[i] = zp::mul(c_[i], pk, m);
  return OkElem(ring_, c, prec_ + ring_->e() * k);
}

OkElem OkElem::mul_pi(int k) const {
  OkElem r = *this;
  const OkElem pi = OkElem::pi(*ring_);
  for (int i = 0; i < k; ++i) r = OkElem(ring_, mul_raw(*ring_, r.c_, pi.c_), r.prec_ + 1);
  return r;
}

OkElem OkElem::with_precision(int precision) const { return OkElem(ring_, c_, std::min(prec_, precision)); }

std::string OkElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < ring_->e(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i];
    if (i == 1) os << "*pi";
    if (i > 1) os << "*pi^" << i;
  }
  if (first) os << "0";
  os << " + O(pi^" << prec_ << ")";
  return os.str();
}

// ---------------------------------------------------------------- KElem

KElem::KElem(OkElem unit_part, int p_shift) : unit_(std::move(unit_part)), shift_(p_shift) { normalize(); }

void KElem::normalize() {
  if (!unit_.valid()) return;
  const int e = ring().e();
  if (shift_ < 0) {
    unit_ = unit_.mul_p(-shift_);
    shift_ = 0;
  }
  while (shift_ > 0 && unit_.precision() >= e) {
    bool divisible = true;
    for (int i = 0; i < e; ++i)
      if (unit_.coeff(i) % ring().p() != 0) divisible = false;
    if (!divisible) break;
    unit_ = unit_.div_p();
    --shift_;
  }
}

KElem KElem::from_rational(const OkRing& ring, Int num, Int den) {
  if (den == 0) throw Error(ErrorKind::NotAUnit, "zero denominator");
  int s = 0;
  while (den % ring.p() == 0) {
    den /= ring.p();
    ++s;
  }
  const Int m = ring.modulus();
  const Int inv = zp::inverse(zp::mod(den, m), ring.p(), m);
  return KElem(OkElem::from_int(ring, zp::mul(zp::mod(num, m), inv, m)), s);
}

std::optional<int> KElem::valuation() const {
  auto v = unit_.valuation();
  if (!v) return std::nullopt;
  return *v - ring().e() * shift_;
}

bool KElem::is_integral() const { return shift_ == 0; }

OkElem KElem::to_ok() const {
  if (shift_ != 0) throw Error(ErrorKind::IntegralityFailure, "non-integral value " + to_string());
  return unit_;
}

KElem operator+(const KElem& a, const KElem& b) {
  if (a.shift_ == b.shift_) return KElem(a.unit_ + b.unit_, a.shift_);
  if (a.shift_ > b.shift_) return KElem(a.unit_ + b.unit_.mul_p(a.shift_ - b.shift_), a.shift_);
  return KElem(a.unit_.mul_p(b.shift_ - a.shift_) + b.unit_, b.shift_);
}

KElem operator*(const KElem& a, const KElem& b) { return KElem(a.unit_ * b.unit_, a.shift_ + b.shift_); }

KElem KElem::divided(Int k) const {
  if (k == 0) throw Error(ErrorKind::NotAUnit, "division by zero");
  int s = 0;
  const Int p = ring().p();
  while (k % p == 0) {
    k /= p;
    ++s;
  }
  const Int m = ring().modulus();
  const Int inv = zp::inverse(zp::mod(k, m), p, m);
  return KElem(unit_.scaled(inv), shift_ + s);
}

KElem KElem::inverse() const {
  auto v = unit_.valuation();
  if (!v) throw Error(ErrorKind::NotAUnit, "inverse of zero");
  const int e = ring().e();
  OkElem u = unit_;
  int k = *v / e;
  int r = *v % e;
  for (int i = 0; i < k; ++i) u = u.div_p();
  OkElem w = u.div_pi(r).inverse();
  if (r == 0) return KElem(w, k - shift_);
  // pi^{-r} = pi^{e-r} / pi^e = -pi^{e-r} B^{-1} / p.
  std::vector<Int> b(e);
  for (int i = 0; i < e; ++i) b[i] = ring().eisenstein()[i] / ring().p();
  OkElem binv = OkElem::from_coeffs(ring(), b).inverse();
  std::vector<Int> mono(e - r + 1, 0);
  mono[e - r] = 1;
  OkElem pi_er = OkElem::from_coeffs(ring(), mono);
  return KElem(-(pi_er * binv * w), 1 + k - shift_);
}

KElem KElem::with_abs_precision(int k) const {
  KElem r = *this;
  r.unit_ = unit_.with_precision(k + ring().e() * shift_);
  return r;
}

std::string KElem::to_string() const {
  if (shift_ == 0) return unit_.to_string();
  return "(" + unit_.to_string() + ")/p^" + std::to_string(shift_);
}

}  // namespace htlab
