#include <random>

#include "doctest.h"
#include "gen.hpp"
#include "htlab/delta_log.hpp"

using namespace htlab;
using testgen::random_witt;
using testgen::uniform;

namespace {

using Big = __int128;

Big big_pow(Big a, int e, Big m) {
  Big r = 1 % m;
  a %= m;
  if (a < 0) a += m;
  for (int i = 0; i < e; ++i) r = r * a % m;
  return r;
}

Big big_mod(Big a, Big m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// Plain integer delta on Z_p: (x - x^p) / p, computed mod p^{N+1} then divided.
Int plain_delta(Int x, Int p, int N) {
  Big m = 1;
  for (int i = 0; i <= N; ++i) m *= p;
  const Big diff = big_mod(Big(x) - big_pow(x, static_cast<int>(p), m), m);
  return static_cast<Int>((diff / p) % (m / p));
}

Big big_inverse(Big a, Big m) {
  // Inverse of a unit modulo m by extended Euclid.
  Big t = 0, nt = 1, r = m, nr = big_mod(a, m);
  while (nr != 0) {
    const Big q = r / nr;
    Big tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return big_mod(t, m);
}

SeriesElem series(const WittRing& w, int M, std::initializer_list<Int> coeffs) {
  SeriesElem s(w, M);
  int i = 0;
  for (Int c : coeffs) s.coeff(i++) = WittElem::from_int(w, c);
  return s;
}

}  // namespace

TEST_CASE("delta examples") {
  const WittRing& w5 = WittRing::get(5, 1, 8);
  const SeriesElem one = series(w5, 1, {1}), zero = series(w5, 1, {0});
  CHECK(delta(one).is_zero());
  CHECK(delta(zero).is_zero());
  const SeriesElem d5 = delta(series(w5, 1, {5}));
  CHECK(d5 == series(w5, 1, {-624}));
  CHECK(d5.precision() == 7);

  // phi(u) = u^p on the truncated series ring.
  const SeriesElem u = SeriesElem::u(w5, 6);
  CHECK(delta(u).is_zero());
  CHECK(frobenius(u, 1) == u.pow(5));

  SeriesElem low = series(w5, 1, {3});
  low.coeff(0) = low.coeff(0).with_precision(1);
  CHECK_THROWS_AS(delta(low), Error);
}

TEST_CASE("delta on Z_p agrees with plain integer arithmetic and loses one digit") {
  std::mt19937_64 rng(2);
  for (Int p : {2, 3, 5})
    for (int N : {3, 6, 8}) {
      const WittRing& w = WittRing::get(p, 1, N);
      for (int trial = 0; trial < 20; ++trial) {
        const Int x = uniform(rng, 0, w.modulus() - 1);
        const SeriesElem d = delta(series(w, 1, {x}));
        CAPTURE(p);
        CAPTURE(x);
        CHECK(d.precision() == N - 1);
        CHECK(d.coeff(0) == WittElem::from_int(w, plain_delta(x, p, N)));
      }
    }
}

TEST_CASE("delta product rule") {
  std::mt19937_64 rng(4);
  const WittRing& w5 = WittRing::get(5, 1, 8);
  CHECK(delta_product_rule_check({{series(w5, 1, {1}), series(w5, 1, {1})}}).ok);
  CHECK(delta_product_rule_check({{series(w5, 1, {5}), series(w5, 1, {5})}}).ok);
  for (Int p : {2, 3, 5})
    for (int f : {1, 2}) {
      const WittRing& w = WittRing::get(p, f, 7);
      std::vector<std::pair<SeriesElem, SeriesElem>> samples;
      for (int trial = 0; trial < 15; ++trial) {
        SeriesElem x(w, 4), y(w, 4);
        for (int i = 0; i < 4; ++i) {
          x.coeff(i) = random_witt(rng, w);
          y.coeff(i) = random_witt(rng, w);
        }
        samples.emplace_back(x, y);
      }
      CHECK(delta_product_rule_check(samples).ok);
    }
}

TEST_CASE("delta_log validation") {
  const WittRing& w = WittRing::get(3, 1, 6);
  const int M = 5;
  const SeriesElem u = SeriesElem::u(w, M), zero(w, M);
  CHECK(delta_log_validate(PrelogCandidate{{"e"}, {u}, {zero}}).valid);
  CHECK(delta_log_validate(PrelogCandidate{}).valid);

  const DeltaLogReport bad = delta_log_validate(PrelogCandidate{{"e"}, {u}, {SeriesElem::constant(WittElem::one(w), M)}});
  CHECK_FALSE(bad.valid);
  CHECK(bad.axiom == "compatibility");
  CHECK(bad.element == std::vector<int>{1});
  CHECK_THROWS_AS(delta_log_require(PrelogCandidate{{"e"}, {u}, {SeriesElem::constant(WittElem::one(w), M)}}), Error);

  // A unit alpha with delta_log = delta(alpha) / alpha^p, next to u.
  const SeriesElem a = series(w, M, {4, 3});
  const SeriesElem dl = delta(a) * a.pow(3).inverse();
  CHECK(delta_log_validate(PrelogCandidate{{"e1", "e2"}, {u, a}, {zero, dl}}).valid);
  SeriesElem off = dl;
  off.coeff(0) += WittElem::from_int(w, 9);
  const DeltaLogReport r = delta_log_validate(PrelogCandidate{{"e1", "e2"}, {u, a}, {zero, off}});
  CHECK_FALSE(r.valid);
  CHECK(r.element == std::vector<int>{0, 1});
}

TEST_CASE("Teichmuller factorization examples") {
  const WittRing& w5 = WittRing::get(5, 1, 3);
  const Factorization t = teichmuller_factorize(teichmuller(w5, 2), 2);
  CHECK(t.y.is_zero());
  CHECK(t.factors.empty());
  CHECK(t.verified);

  const Factorization f = teichmuller_factorize(WittElem::from_int(w5, 2), 2);
  CHECK(f.verified);
  CHECK(f.verified_precision == 3);
  CHECK(f.teichmuller_part == WittElem::from_int(w5, 57));  // [2] mod 125
  CHECK(teichmuller(WittRing::get(5, 1, 2), 2) == WittElem::from_int(WittRing::get(5, 1, 2), 7));

  CHECK_THROWS_AS(teichmuller_factorize(WittElem::from_int(w5, 5), 2), Error);
  try {
    teichmuller_factorize(WittElem::from_int(w5, 2), 1, 3);
    FAIL("horizon accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HorizonTooSmall);
  }
}

TEST_CASE("Teichmuller factorization over Z_p matches integer arithmetic") {
  std::mt19937_64 rng(6);
  for (Int p : {2, 3, 5})
    for (int M = 1; M <= 5; ++M) {
      const int N = 6;
      const WittRing& w = WittRing::get(p, 1, N);
      const Big m = w.modulus();
      for (int trial = 0; trial < 8; ++trial) {
        Int x;
        do x = uniform(rng, 1, w.modulus() - 1);
        while (x % p == 0);
        // [a] = lim a^{p^k}; y = (x^{1-p} - 1) / p since phi = id.
        Big teich = x % p;
        for (int k = 0; k < N; ++k) teich = big_pow(teich, static_cast<int>(p), m);
        const Big mp = m * p;
        const Big ratio = big_inverse(big_pow(x, static_cast<int>(p) - 1, mp), mp);
        const Big y = big_mod(ratio - 1, mp) / p;
        Big product = teich;
        Big e = 1;
        for (int i = 1; i <= M; ++i) {
          product = product * big_pow(1 + p * y, static_cast<int>(e), m) % m;
          e *= p;
        }
        const int target = std::min(N, M + 1);
        Big pt = 1;
        for (int i = 0; i < target; ++i) pt *= p;
        CAPTURE(x);
        CAPTURE(M);
        CHECK(big_mod(product - x, pt) == 0);
        const Factorization f = teichmuller_factorize(WittElem::from_int(w, x), M);
        CHECK(f.verified);
        CHECK(f.verified_precision == target);
        CHECK(f.teichmuller_part == WittElem::from_int(w, static_cast<Int>(teich)));
      }
    }
}

TEST_CASE("Teichmuller factorization on random units with f = 1, 2") {
  std::mt19937_64 rng(10);
  int count = 0;
  for (Int p : {2, 3, 5})
    for (int f : {1, 2}) {
      const WittRing& w = WittRing::get(p, f, 6);
      for (int trial = 0; trial < 20; ++trial) {
        WittElem x;
        do x = random_witt(rng, w);
        while (!x.is_unit());
        const Factorization fac = teichmuller_factorize(x, 5);
        // phi(x) = x^p (1 + p y) and the factors have the stated shape.
        CHECK(frobenius(x, 1) == x.pow(static_cast<std::uint64_t>(p)) * (WittElem::one(w) + fac.y.scaled(p)));
        WittElem prod = teichmuller(w, x.residue());
        std::uint64_t e = 1;
        for (int i = 1; i <= 5; ++i) {
          prod *= (WittElem::one(w) + frobenius(fac.y, f * 8 - i).scaled(p)).pow(e);
          e *= static_cast<std::uint64_t>(p);
        }
        CHECK((prod - x).with_precision(6).is_zero());
        CHECK(fac.verified);
        ++count;
      }
    }
  CHECK(count >= 100);
}
