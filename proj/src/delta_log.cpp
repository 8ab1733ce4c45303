#include "htlab/delta_log.hpp"

#include <algorithm>
#include <sstream>

namespace htlab {

SeriesElem::SeriesElem(const WittRing& ring, int M) : ring_(&ring), c_(M, WittElem::zero(ring)) {}

SeriesElem SeriesElem::constant(const WittElem& c, int M) {
  SeriesElem s(c.ring(), M);
  s.c_[0] = c;
  return s;
}

SeriesElem SeriesElem::u(const WittRing& ring, int M) {
  SeriesElem s(ring, M);
  if (M > 1) s.c_[1] = WittElem::one(ring);
  return s;
}

int SeriesElem::precision() const {
  int prec = ring_->N();
  for (const auto& c : c_) prec = std::min(prec, c.precision());
  return prec;
}

bool SeriesElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const WittElem& c) { return c.is_zero(); });
}

SeriesElem SeriesElem::operator-() const {
  SeriesElem r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

SeriesElem operator+(const SeriesElem& a, const SeriesElem& b) {
  SeriesElem r = a;
  for (int i = 0; i < a.M(); ++i) r.c_[i] += b.c_[i];
  return r;
}

SeriesElem operator-(const SeriesElem& a, const SeriesElem& b) {
  SeriesElem r = a;
  for (int i = 0; i < a.M(); ++i) r.c_[i] -= b.c_[i];
  return r;
}

SeriesElem operator*(const SeriesElem& a, const SeriesElem& b) {
  const int M = a.M();
  SeriesElem r(*a.ring_, M);
  int prec = std::min(a.precision(), b.precision());
  for (int i = 0; i < M; ++i)
    for (int j = 0; i + j < M; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  for (auto& c : r.c_) c = c.with_precision(prec);
  return r;
}

SeriesElem SeriesElem::scaled(Int k) const {
  SeriesElem r = *this;
  for (auto& c : r.c_) c = c.scaled(k);
  return r;
}

SeriesElem SeriesElem::pow(std::uint64_t k) const {
  SeriesElem result = constant(WittElem::one(*ring_), M());
  SeriesElem base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

SeriesElem SeriesElem::inverse() const {
  if (!is_unit()) throw Error(ErrorKind::NotAUnit, to_string());
  SeriesElem inv = constant(c_[0].inverse(), M());
  const SeriesElem two = constant(WittElem::from_int(*ring_, 2), M());
  for (int known = 1; known < 2 * M() * ring_->N(); known *= 2) inv = inv * (two - *this * inv);
  return inv;
}

SeriesElem SeriesElem::div_p() const {
  SeriesElem r = *this;
  for (auto& c : r.c_) c = c.div_p();
  return r;
}

std::string SeriesElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < M(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].to_string();
    if (i > 0) os << "*u^" << i;
  }
  if (first) os << "0";
  return os.str();
}

SeriesElem frobenius(const SeriesElem& x, int k) {
  SeriesElem r(x.ring(), x.M());
  const int f = x.ring().f();
  const int steps = ((k % f) + f) % f;
  // u -> u^{p^k}; only nonnegative powers make sense on the series part.
  std::uint64_t upow = 1;
  for (int i = 0; i < std::max(k, 0); ++i) upow *= static_cast<std::uint64_t>(x.ring().p());
  if (k < 0 && x.M() > 1)
    for (int i = 1; i < x.M(); ++i)
      if (!x.coeff(i).is_zero()) throw Error(ErrorKind::BadIndex, "inverse Frobenius on a non-constant series");
  for (int i = 0; i < x.M(); ++i) {
    const std::uint64_t target = static_cast<std::uint64_t>(i) * upow;
    if (target >= static_cast<std::uint64_t>(x.M())) continue;
    r.coeff(static_cast<int>(target)) = frobenius(x.coeff(i), steps);
  }
  return r;
}

SeriesElem delta(const SeriesElem& x) {
  if (x.precision() < 2) throw Error(ErrorKind::PrecisionExhausted, "delta needs at least two digits");
  const SeriesElem diff = frobenius(x, 1) - x.pow(static_cast<std::uint64_t>(x.ring().p()));
  return diff.div_p();
}

IdentityReport delta_product_rule_check(const std::vector<std::pair<SeriesElem, SeriesElem>>& samples) {
  IdentityReport report;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& [x, y] = samples[k];
    const auto p = static_cast<std::uint64_t>(x.ring().p());
    const SeriesElem dx = delta(x), dy = delta(y);
    const SeriesElem lhs = delta(x * y);
    const SeriesElem rhs = x.pow(p) * dy + y.pow(p) * dx + (dx * dy).scaled(x.ring().p());
    if (!(lhs == rhs)) {
      report.ok = false;
      report.witness = "sample " + std::to_string(k) + ": x=" + x.to_string() + " y=" + y.to_string();
      return report;
    }
  }
  return report;
}

namespace {

void enumerate_exponents(int k, int max_total, std::vector<int>& cur, int pos, int total,
                         std::vector<std::vector<int>>& out) {
  if (pos == k) {
    if (total > 0) out.push_back(cur);
    return;
  }
  for (int a = 0; total + a <= max_total; ++a) {
    cur[pos] = a;
    enumerate_exponents(k, max_total, cur, pos + 1, total + a, out);
  }
  cur[pos] = 0;
}

int total_degree(const std::vector<int>& a) {
  int t = 0;
  for (int x : a) t += x;
  return t;
}

}  // namespace

DeltaLogReport delta_log_validate(const PrelogCandidate& c) {
  DeltaLogReport report;
  const std::size_t k = c.generators.size();
  if (k == 0) return report;
  if (c.alpha.size() != k || c.deltalog.size() != k)
    throw Error(ErrorKind::BadIndex, "prelog candidate has mismatched lengths");
  const WittRing& ring = c.alpha[0].ring();
  const int M = c.alpha[0].M();
  const Int p = ring.p();
  const SeriesElem one = SeriesElem::constant(WittElem::one(ring), M);
  const SeriesElem zero(ring, M);

  auto fail = [&](const char* axiom, std::vector<int> element) {
    report.valid = false;
    report.axiom = axiom;
    report.element = std::move(element);
    return report;
  };

  // alpha and delta_log on a monoid element: the latter by folding the
  // product law one generator at a time.
  auto alpha_of = [&](const std::vector<int>& a) {
    SeriesElem r = one;
    for (std::size_t i = 0; i < k; ++i) r = r * c.alpha[i].pow(static_cast<std::uint64_t>(a[i]));
    return r;
  };
  auto deltalog_fold = [&](const std::vector<int>& a) {
    SeriesElem d = zero;
    for (std::size_t i = 0; i < k; ++i)
      for (int rep = 0; rep < a[i]; ++rep) d = d + c.deltalog[i] + (d * c.deltalog[i]).scaled(p);
    return d;
  };
  // Multiplicative route: 1 + p delta_log(m) = prod (1 + p delta_log(e_i))^{a_i}.
  auto deltalog_mult = [&](const std::vector<int>& a) {
    SeriesElem r = one;
    for (std::size_t i = 0; i < k; ++i)
      r = r * (one + c.deltalog[i].scaled(p)).pow(static_cast<std::uint64_t>(a[i]));
    return (r - one).div_p();
  };

  const std::vector<int> unit(k, 0);
  if (!deltalog_fold(unit).is_zero()) return fail("unit", unit);

  std::vector<std::vector<int>> elements;
  std::vector<int> cur(k, 0);
  enumerate_exponents(static_cast<int>(k), 3, cur, 0, 0, elements);
  std::sort(elements.begin(), elements.end(), [](const auto& a, const auto& b) {
    const int ta = total_degree(a), tb = total_degree(b);
    return ta != tb ? ta < tb : a > b;
  });

  for (const auto& m : elements) {
    const SeriesElem am = alpha_of(m);
    const SeriesElem lhs = am.pow(static_cast<std::uint64_t>(p)) * deltalog_fold(m);
    if (!(lhs == delta(am))) return fail("compatibility", m);
  }

  for (const auto& m1 : elements)
    for (const auto& m2 : elements) {
      if (total_degree(m1) + total_degree(m2) > 3) continue;
      std::vector<int> prod(k);
      for (std::size_t i = 0; i < k; ++i) prod[i] = m1[i] + m2[i];
      const SeriesElem d1 = deltalog_fold(m1), d2 = deltalog_fold(m2);
      if (!(deltalog_mult(prod) == d1 + d2 + (d1 * d2).scaled(p))) return fail("product", prod);
    }

  for (const auto& m : elements) {
    const SeriesElem am = alpha_of(m);
    const SeriesElem rhs = am.pow(static_cast<std::uint64_t>(p)) * (one + deltalog_fold(m).scaled(p));
    if (!(frobenius(am, 1) == rhs)) return fail("frobenius", m);
  }
  return report;
}

void delta_log_require(const PrelogCandidate& c) {
  const DeltaLogReport r = delta_log_validate(c);
  if (r.valid) return;
  std::string elem;
  for (std::size_t i = 0; i < r.element.size(); ++i) elem += (i ? "," : "") + std::to_string(r.element[i]);
  throw Error(ErrorKind::AxiomViolation, r.axiom + " at (" + elem + ")");
}

Factorization teichmuller_factorize(const WittElem& x, int horizon, int requested) {
  const WittRing& ring = x.ring();
  if (!x.is_unit()) throw Error(ErrorKind::NotAUnit, x.to_string());
  if (horizon < 0) throw Error(ErrorKind::HorizonTooSmall, "negative horizon");
  const int target = requested < 0 ? std::min(ring.N(), horizon + 1) : requested;
  if (target > horizon + 1)
    throw Error(ErrorKind::HorizonTooSmall,
                "precision " + std::to_string(target) + " needs horizon >= " + std::to_string(target - 1));
  if (target > x.precision())
    throw Error(ErrorKind::PrecisionExhausted, "input known only to p^" + std::to_string(x.precision()));

  const Int p = ring.p();
  Factorization out;
  out.a = x.residue();
  out.teichmuller_part = teichmuller(ring, out.a);
  const WittElem ratio = frobenius(x, 1) * x.pow(static_cast<std::uint64_t>(p)).inverse();
  out.y = (ratio - WittElem::one(ring)).div_p();

  WittElem product = out.teichmuller_part;
  if (!out.y.is_zero()) {
    std::uint64_t exponent = 1;
    for (int i = 1; i <= horizon; ++i) {
      const WittElem factor = (WittElem::one(ring) + frobenius(out.y, -i).scaled(p)).pow(exponent);
      out.factors.push_back(factor);
      product *= factor;
      if (exponent < (std::uint64_t(1) << 40)) exponent *= static_cast<std::uint64_t>(p);
    }
  }
  out.verified_precision = target;
  out.verified = (product - x).with_precision(target).is_zero();
  return out;
}

}  // namespace htlab
