#include "htlab/formal.hpp"

#include <sstream>

namespace htlab {

GroupElt group_identity(int d) { return GroupElt{std::vector<Int>(d, 0), 0, 1}; }

GroupElt group_compose(const GroupElt& s, const GroupElt& u, Int modulus) {
  if (s.n.size() != u.n.size()) throw Error(ErrorKind::BadIndex, "group elements of different rank");
  GroupElt r;
  r.n.resize(s.n.size());
  for (std::size_t i = 0; i < s.n.size(); ++i) r.n[i] = zp::mod(s.n[i] + static_cast<Wide>(s.chi) * u.n[i], modulus);
  r.c = zp::mod(s.c + static_cast<Wide>(s.chi) * u.c, modulus);
  r.chi = zp::mul(s.chi, u.chi, modulus);
  return r;
}

bool group_equal(const GroupElt& a, const GroupElt& b, Int modulus) {
  if (a.n.size() != b.n.size()) return false;
  for (std::size_t i = 0; i < a.n.size(); ++i)
    if (zp::mod(a.n[i] - b.n[i], modulus) != 0) return false;
  return zp::mod(a.c - b.c, modulus) == 0 && zp::mod(a.chi - b.chi, modulus) == 0;
}

FormalC::FormalC(const ChartCtx& ctx, int order) : ctx_(&ctx), c_(order, ChartElem(ctx)) {}

FormalC FormalC::constant(const ChartElem& c, int order) { return monomial(c, 0, order); }

FormalC FormalC::monomial(const ChartElem& c, int k, int order) {
  FormalC r(c.ctx(), order);
  if (k < order) r.c_[k] = c;
  return r;
}

bool FormalC::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

FormalC FormalC::operator-() const {
  FormalC r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

FormalC operator+(const FormalC& a, const FormalC& b) {
  FormalC r = a;
  for (int k = 0; k < a.order(); ++k) r.c_[k] += b.c_[k];
  return r;
}

FormalC operator-(const FormalC& a, const FormalC& b) {
  FormalC r = a;
  for (int k = 0; k < a.order(); ++k) r.c_[k] -= b.c_[k];
  return r;
}

FormalC operator*(const FormalC& a, const FormalC& b) {
  const int T = std::min(a.order(), b.order());
  FormalC r(*a.ctx_, T);
  for (int i = 0; i < T; ++i)
    for (int j = 0; i + j < T; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  return r;
}

FormalC FormalC::times(const ChartElem& s) const {
  FormalC r = *this;
  for (auto& c : r.c_) c = c * s;
  return r;
}

std::string FormalC::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < order(); ++k) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "[" << c_[k].to_string() << "]";
    if (k > 0) os << "*t^" << k;
  }
  if (first) os << "0";
  os << " + O(t^" << order() << ")";
  return os.str();
}

FormalC galois_image_of_t(const GroupElt& s, const OkElem& alpha, const ChartCtx& ctx, int order) {
  FormalC r(ctx, order);
  const OkRing& ring = ctx.ring();
  const KElem ac = KElem(alpha * OkElem::from_int(ring, s.c));
  KElem coeff = KElem::from_int(ring, s.chi);
  for (int k = 1; k < order; ++k) {
    r.coeff(k) = ChartElem(ctx, coeff);
    coeff = coeff * ac;
  }
  return r;
}

FormalC galois_act_t(const GroupElt& s, const FormalC& x, const OkElem& alpha) {
  const FormalC st = galois_image_of_t(s, alpha, x.ctx(), x.order());
  // Horner in s(t).
  FormalC acc(x.ctx(), x.order());
  for (int k = x.order(); k-- > 0;) acc = acc * st + FormalC::constant(x.coeff(k), x.order());
  return acc;
}

Matrix<FormalC> galois_act_t(const GroupElt& s, const Matrix<FormalC>& x, const OkElem& alpha) {
  return x.map([&](const FormalC& e) { return galois_act_t(s, e, alpha); });
}

}  // namespace htlab
