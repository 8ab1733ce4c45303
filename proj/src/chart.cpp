#include "htlab/chart.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace htlab {

const ChartCtx& ChartCtx::get(const OkRing& ring, int d, int r, int degree_cutoff) {
  static std::mutex lock;
  static std::map<std::tuple<const OkRing*, int, int, int>, std::unique_ptr<ChartCtx>> registry;
  if (d < 0 || d >= kMaxChartVars) throw Error(ErrorKind::BadIndex, "chart dimension " + std::to_string(d));
  if (d > 0 && (r < 0 || r > d)) throw Error(ErrorKind::BadIndex, "chart r must lie in [0, d]");
  if (d == 0) {
    r = 0;
    degree_cutoff = 0;
  }
  std::lock_guard guard(lock);
  auto key = std::make_tuple(&ring, d, r, degree_cutoff);
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::unique_ptr<ChartCtx>(new ChartCtx(&ring, d, r, degree_cutoff))).first;
  return *it->second;
}

int ChartCtx::degree(const Mono& m) const {
  int deg = 0;
  for (int i = 0; i < num_vars(); ++i) deg += i <= r_ ? m[i] : std::abs(static_cast<int>(m[i]));
  return deg;
}

namespace {

bool is_zero_mono(const Mono& m) {
  return std::all_of(m.begin(), m.end(), [](std::int8_t x) { return x == 0; });
}

KElem pi_power(const OkRing& ring, int k) {
  OkElem r = OkElem::one(ring);
  const OkElem pi = OkElem::pi(ring);
  for (int i = 0; i < k; ++i) r *= pi;
  return KElem(r);
}

// Brings a monomial to normal form; returns false if it is truncated away.
bool normalize_term(const ChartCtx& ctx, Mono& mono, KElem& coeff) {
  if (ctx.is_point()) return true;
  int m = mono[0];
  for (int i = 1; i <= ctx.r(); ++i) m = std::min(m, static_cast<int>(mono[i]));
  if (m < 0) throw Error(ErrorKind::BadIndex, "negative exponent on a non-Laurent chart variable");
  if (m > 0) {
    for (int i = 0; i <= ctx.r(); ++i) mono[i] = static_cast<std::int8_t>(mono[i] - m);
    coeff = coeff * pi_power(ctx.ring(), m);
  }
  return ctx.degree(mono) <= ctx.cutoff();
}

int add_floor(int f, int v) {
  if (f == INT_MAX || v == INT_MAX) return INT_MAX;
  return f + v;
}

}  // namespace

ChartElem::ChartElem(const ChartCtx& ctx) : ctx_(&ctx) { terms_.push_back({Mono{}, KElem::zero(ctx.ring())}); }

ChartElem::ChartElem(const ChartCtx& ctx, const KElem& c) : ctx_(&ctx) { terms_.push_back({Mono{}, c}); }

ChartElem ChartElem::monomial(const ChartCtx& ctx, const Mono& mono, const KElem& c) {
  ChartElem r(ctx);
  Mono m = mono;
  KElem coeff = c;
  if (!normalize_term(ctx, m, coeff)) {
    r.truncated_ = true;
    return r;
  }
  if (is_zero_mono(m))
    r.terms_[0].coeff = coeff;
  else if (!coeff.is_zero())
    r.terms_.push_back({m, coeff});
  return r;
}

ChartElem ChartElem::variable(const ChartCtx& ctx, int i) {
  if (i < 0 || i >= ctx.num_vars()) throw Error(ErrorKind::BadIndex, "chart variable T_" + std::to_string(i));
  Mono m{};
  m[i] = 1;
  return monomial(ctx, m, KElem::one(ctx.ring()));
}

bool ChartElem::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff.is_zero(); });
}

bool ChartElem::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff.is_zero() || t.coeff.is_integral(); });
}

std::optional<int> ChartElem::valuation() const {
  std::optional<int> best;
  for (const auto& t : terms_) {
    if (t.coeff.is_zero()) continue;
    const int v = t.coeff.valuation_capped();
    if (!best || v < *best) best = v;
  }
  return best;
}

int ChartElem::low_valuation() const {
  int best = floor_;
  for (const auto& t : terms_) best = std::min(best, t.coeff.valuation_capped());
  return best;
}

int ChartElem::precision() const {
  int best = floor_;
  for (const auto& t : terms_) best = std::min(best, t.coeff.precision());
  return best;
}

void ChartElem::apply_floor() {
  if (floor_ == INT_MAX) return;
  for (auto& t : terms_) t.coeff = t.coeff.with_abs_precision(floor_);
  auto it = std::remove_if(terms_.begin() + 1, terms_.end(), [](const Term& t) { return t.coeff.is_zero(); });
  terms_.erase(it, terms_.end());
}

ChartElem ChartElem::operator-() const {
  ChartElem r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

ChartElem operator+(const ChartElem& a, const ChartElem& b) {
  ChartElem r = a;
  r += b;
  return r;
}

ChartElem& ChartElem::operator+=(const ChartElem& b) {
  terms_[0].coeff += b.terms_[0].coeff;
  floor_ = std::min(floor_, b.floor_);
  truncated_ = truncated_ || b.truncated_;
  if (b.terms_.size() > 1 || terms_.size() > 1) {
    std::vector<Term> merged;
    merged.reserve(terms_.size() + b.terms_.size());
    merged.push_back(terms_[0]);
    std::size_t i = 1, j = 1;
    auto push = [&](Term t) {
      if (t.coeff.is_zero())
        floor_ = std::min(floor_, t.coeff.precision());
      else
        merged.push_back(std::move(t));
    };
    while (i < terms_.size() || j < b.terms_.size()) {
      if (j >= b.terms_.size() || (i < terms_.size() && terms_[i].mono < b.terms_[j].mono)) {
        merged.push_back(terms_[i++]);
      } else if (i >= terms_.size() || b.terms_[j].mono < terms_[i].mono) {
        merged.push_back(b.terms_[j++]);
      } else {
        push({terms_[i].mono, terms_[i].coeff + b.terms_[j].coeff});
        ++i;
        ++j;
      }
    }
    terms_ = std::move(merged);
  }
  apply_floor();
  return *this;
}

ChartElem operator-(const ChartElem& a, const ChartElem& b) {
  ChartElem r = a;
  r += -b;
  return r;
}

ChartElem operator*(const ChartElem& a, const ChartElem& b) {
  ChartElem r(*a.ctx_);
  r.truncated_ = a.truncated_ || b.truncated_;
  r.floor_ = std::min(add_floor(a.floor_, b.low_valuation()), add_floor(b.floor_, a.low_valuation()));
  if (a.terms_.size() == 1 && b.terms_.size() == 1) {
    r.terms_[0].coeff = a.terms_[0].coeff * b.terms_[0].coeff;
    r.apply_floor();
    return r;
  }
  std::vector<ChartElem::Term> prods;
  prods.reserve(a.terms_.size() * b.terms_.size());
  KElem constant = KElem::zero(a.ring());
  bool constant_set = false;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      Mono m{};
      for (int k = 0; k < kMaxChartVars; ++k) m[k] = static_cast<std::int8_t>(ta.mono[k] + tb.mono[k]);
      KElem c = ta.coeff * tb.coeff;
      if (!normalize_term(*a.ctx_, m, c)) {
        if (!c.is_zero()) r.truncated_ = true;
        continue;
      }
      if (is_zero_mono(m)) {
        constant = constant_set ? constant + c : c;
        constant_set = true;
      } else {
        prods.push_back({m, c});
      }
    }
  if (constant_set) r.terms_[0].coeff = constant;
  std::sort(prods.begin(), prods.end(), [](const auto& x, const auto& y) { return x.mono < y.mono; });
  for (std::size_t i = 0; i < prods.size();) {
    std::size_t j = i + 1;
    KElem c = prods[i].coeff;
    while (j < prods.size() && prods[j].mono == prods[i].mono) c += prods[j++].coeff;
    if (c.is_zero())
      r.floor_ = std::min(r.floor_, c.precision());
    else
      r.terms_.push_back({prods[i].mono, c});
    i = j;
  }
  r.apply_floor();
  return r;
}

ChartElem ChartElem::scaled(Int k) const {
  ChartElem r = *this;
  for (auto& t : r.terms_) t.coeff = t.coeff.scaled(k);
  auto it = std::remove_if(r.terms_.begin() + 1, r.terms_.end(), [&](const Term& t) {
    if (!t.coeff.is_zero()) return false;
    r.floor_ = std::min(r.floor_, t.coeff.precision());
    return true;
  });
  r.terms_.erase(it, r.terms_.end());
  r.apply_floor();
  return r;
}

ChartElem ChartElem::divided(Int k) const {
  ChartElem r = *this;
  for (auto& t : r.terms_) t.coeff = t.coeff.divided(k);
  if (r.floor_ != INT_MAX) {
    Int kk = k;
    while (kk % ring().p() == 0) {
      kk /= ring().p();
      r.floor_ -= ring().e();
    }
  }
  return r;
}

ChartElem ChartElem::times(const KElem& k) const {
  return *this * ChartElem(*ctx_, k);
}

ChartElem ChartElem::with_abs_precision(int k) const {
  ChartElem r = *this;
  r.floor_ = std::min(r.floor_, k);
  r.apply_floor();
  return r;
}

std::string ChartElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (t.coeff.is_zero() && !(first && terms_.size() == 1)) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coeff.to_string() << ")";
    for (int i = 0; i < ctx_->num_vars(); ++i)
      if (t.mono[i] != 0) os << "*T" << i << "^" << static_cast<int>(t.mono[i]);
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace htlab
