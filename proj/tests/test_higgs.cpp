#include <numeric>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "gen.hpp"
#include "htlab/higgs.hpp"

using namespace htlab;
using testgen::uniform;

namespace {

const BaseConfig& unramified5() {
  static const BaseConfig cfg = make_base_config(5, {-5, 1}, 1, 8);
  return cfg;
}

ChartMatrix mat(const ChartCtx& ctx, std::initializer_list<std::initializer_list<Int>> rows) {
  ChartMatrix m = chart_zero(ctx, rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (Int x : r) m(i, j++) = ChartElem(ctx, x);
    ++i;
  }
  return m;
}

// Theta = [[0,1],[0,0]], A = diag(0, a).
HiggsData two_by_two(const BaseConfig& cfg, Int a, Twist twist = Twist::Log) {
  const ChartCtx& ctx = ChartCtx::point(*cfg.ring);
  HiggsData h = zero_higgs(HiggsFlavor::AbsGeom, 2, 1, ctx, twist);
  h.theta[0] = mat(ctx, {{0, 1}, {0, 0}});
  h.phi = mat(ctx, {{0, 0}, {0, a}});
  return h;
}

int v5(Int x) {
  int v = 0;
  while (x % 5 == 0) {
    x /= 5;
    ++v;
  }
  return v;
}

}  // namespace

TEST_CASE("validate_higgs on the hand examples") {
  const BaseConfig& cfg = unramified5();
  const HiggsCertificate cert = validate_higgs(cfg, two_by_two(cfg, 5));
  CHECK(cert.status == Status::Pass);
  // P_n = diag(0, 5^n n!); the certificate fires at the first n with v(5^n n!) >= 8.
  int expected = 1;
  while (expected + v5([&] {
           Int f = 1;
           for (int i = 2; i <= expected; ++i) f *= i;
           return f;
         }()) < 8)
    ++expected;
  REQUIRE(cert.n_star.has_value());
  CHECK(*cert.n_star == expected);

  HiggsData broken = two_by_two(cfg, 5);
  broken.phi = mat(ChartCtx::point(*cfg.ring), {{1, 0}, {0, 1}});
  CHECK_THROWS_WITH_AS(validate_higgs(cfg, broken), doctest::Contains("Theta_1"), Error);
  try {
    validate_higgs(cfg, broken);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BraidFailure);
  }

  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  const HiggsCertificate zero = validate_higgs(cfg, zero_higgs(HiggsFlavor::AbsGeom, 2, 1, pt));
  CHECK(zero.status == Status::Pass);
  CHECK(zero.n_star == 1);

  // A unit phi with Theta = 0 never certifies.
  HiggsData unit = zero_higgs(HiggsFlavor::AbsGeom, 2, 1, pt);
  unit.phi = mat(pt, {{1, 0}, {0, 1}});
  CHECK(validate_higgs(cfg, unit).status == Status::Undecided);
}

TEST_CASE("validate_higgs failure kinds") {
  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  auto kind_of = [&](const HiggsData& h) {
    try {
      validate_higgs(cfg, h);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ParseError;
  };

  HiggsData noncomm = zero_higgs(HiggsFlavor::RelGeom, 2, 2, pt);
  noncomm.theta[0] = mat(pt, {{0, 1}, {0, 0}});
  noncomm.theta[1] = mat(pt, {{0, 0}, {1, 0}});
  CHECK(kind_of(noncomm) == ErrorKind::CommutationFailure);

  // Theta = A = diag(1, 0)-style: braid holds trivially for Theta = 0 on one side.
  HiggsData notnil = zero_higgs(HiggsFlavor::AbsGeom, 1, 1, pt);
  notnil.theta[0] = mat(pt, {{3}});
  // [Theta, A] = 0 = 5 * 3 fails first.
  CHECK(kind_of(notnil) == ErrorKind::BraidFailure);

  HiggsData frac = two_by_two(cfg, 5);
  frac.theta[0](0, 1) = ChartElem(pt, KElem::from_rational(*cfg.ring, 1, 5));
  CHECK(kind_of(frac) == ErrorKind::IntegralityFailure);
  frac.integral = false;
  CHECK(kind_of(frac) == ErrorKind::ParseError);  // no error

  HiggsData bad_shape = two_by_two(cfg, 5);
  bad_shape.phi = chart_zero(pt, 2, 3);
  CHECK(kind_of(bad_shape) == ErrorKind::ValidationFailure);
}

TEST_CASE("relative data: topological nilpotence certificate") {
  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  HiggsData h = zero_higgs(HiggsFlavor::RelGeom, 2, 1, pt);
  h.theta[0] = mat(pt, {{0, 1}, {0, 0}});
  const HiggsCertificate c = validate_higgs(cfg, h);
  CHECK(c.status == Status::Pass);
  CHECK(c.n_star == 2);
  // Small but not nilpotent: 5 * identity has Theta^k = 5^k.
  h.theta[0] = mat(pt, {{5, 0}, {0, 5}});
  const HiggsCertificate c2 = validate_higgs(cfg, h);
  CHECK(c2.status == Status::Pass);
  CHECK(c2.n_star == 8);
  h.theta[0] = mat(pt, {{1, 0}, {0, 0}});
  CHECK(validate_higgs(cfg, h).status == Status::Undecided);
}

TEST_CASE("stratification_from_higgs examples") {
  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);

  HiggsData rank1 = zero_higgs(HiggsFlavor::AbsArith, 1, 0, pt);
  rank1.phi = mat(pt, {{-5}});
  const Stratification s1 = stratification_from_higgs(cfg, rank1, 5);
  CHECK(s1.at({0, {}}) == mat(pt, {{1}}));
  CHECK(s1.at({1, {}}) == mat(pt, {{-5}}));
  for (int n = 2; n <= 5; ++n) CHECK(is_zero(s1.at({n, {}})));

  const Stratification s2 = stratification_from_higgs(cfg, two_by_two(cfg, 5), 4);
  CHECK(s2.at({0, {1}}) == mat(pt, {{0, 1}, {0, 0}}));
  CHECK(s2.at({1, {0}}) == mat(pt, {{0, 0}, {0, 5}}));
  CHECK(s2.at({1, {1}}) == mat(pt, {{0, 5}, {0, 0}}));
  CHECK(s2.at({2, {0}}) == mat(pt, {{0, 0}, {0, 50}}));

  const Stratification s3 = stratification_from_higgs(cfg, zero_higgs(HiggsFlavor::AbsGeom, 2, 2, pt), 3);
  for (const auto& [key, m] : s3.coeffs) {
    if (key.n == 0 && key.I == std::vector<int>{0, 0})
      CHECK(m == chart_identity(pt, 2));
    else
      CHECK(is_zero(m));
  }

  HiggsData rel = zero_higgs(HiggsFlavor::RelGeom, 2, 1, pt);
  rel.theta[0] = mat(pt, {{0, 3}, {0, 0}});
  const Stratification s4 = stratification_from_higgs(cfg, rel, 3);
  CHECK(s4.at({0, {1}}) == rel.theta[0]);
  CHECK(is_zero(s4.at({0, {2}})));
  CHECK(s4.coeffs.size() == 4);
}

TEST_CASE("higgs_from_stratification: roundtrip, corruption, identity") {
  for (const auto& item : testgen::higgs_corpus(101, 50, 3, 2)) {
    CAPTURE(item.label);
    const Stratification s = stratification_from_higgs(item.cfg, item.h, 4);
    const HiggsData back = higgs_from_stratification(item.cfg, s);
    REQUIRE(back.d() == item.h.d());
    for (int i = 0; i < back.d(); ++i) CHECK(matrix_residual(back.theta[i], item.h.theta[i], "Theta").zero());
    CHECK(matrix_residual(back.phi, item.h.phi, "A").zero());
  }

  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  Stratification s = stratification_from_higgs(cfg, two_by_two(cfg, 5), 4);
  s.coeffs.at({2, {0}})(1, 1) += ChartElem(pt, KElem(OkElem::from_int(*cfg.ring, cfg.ring->pow_p(7))));
  try {
    higgs_from_stratification(cfg, s);
    FAIL("corruption not detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClosedFormMismatch);
    CHECK(std::string(e.what()).find("(2,[0])") != std::string::npos);
  }

  const Stratification id = stratification_from_higgs(cfg, zero_higgs(HiggsFlavor::AbsGeom, 2, 1, pt), 3);
  const HiggsData z = higgs_from_stratification(cfg, id);
  CHECK(is_zero(z.phi));
  CHECK(is_zero(z.theta[0]));

  Stratification bad = id;
  bad.coeffs.at({0, {0}})(0, 0) = ChartElem(pt, 2);
  try {
    higgs_from_stratification(cfg, bad);
    FAIL("bad unit coefficient not detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidUnitCoefficient);
  }
}

TEST_CASE("check_cocycle examples") {
  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  const Stratification id = stratification_from_higgs(cfg, zero_higgs(HiggsFlavor::AbsGeom, 2, 1, pt), 4);
  CHECK(check_cocycle(cfg, id, 4).ok);

  const CocycleReport good = check_cocycle(cfg, stratification_from_higgs(cfg, two_by_two(cfg, 5), 4), 4);
  CHECK(good.ok);
  CHECK(good.residual.zero());

  // [Theta, A] = Theta instead of 5 Theta.
  const CocycleReport bad = check_cocycle(cfg, stratification_closed_form(cfg, two_by_two(cfg, 1), 4), 4);
  CHECK_FALSE(bad.ok);
  REQUIRE(!bad.failing.empty());
  CHECK(bad.residual.first_witness.find("X1*Y1,2") != std::string::npos);
  CHECK(bad.failing.front().find("X1*Y1,2") != std::string::npos);
}

TEST_CASE("check_cocycle agrees with the closed form on random data") {
  for (const auto& item : testgen::higgs_corpus(202, 12, 3, 2)) {
    CAPTURE(item.label);
    for (int D = 1; D <= 4; ++D) {
      const Stratification s = stratification_from_higgs(item.cfg, item.h, D);
      const CocycleReport rep = check_cocycle(item.cfg, s, D);
      CAPTURE(rep.residual.first_witness);
      CHECK(rep.ok);
    }
  }
}

TEST_CASE("cocycle check on the other flavors and twists") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 12; ++k) {
    const BaseConfig cfg = testgen::random_base(rng, 8);
    testgen::HiggsShape shape;
    shape.flavor = k % 3 == 0 ? HiggsFlavor::AbsArith : (k % 3 == 1 ? HiggsFlavor::RelGeom : HiggsFlavor::AbsGeom);
    shape.rank = static_cast<int>(uniform(rng, 1, 3));
    shape.d = static_cast<int>(uniform(rng, 1, 2));
    shape.twist = k % 2 ? Twist::Smooth : Twist::Log;
    const HiggsData h = testgen::random_higgs(rng, cfg, shape);
    const Stratification s = stratification_closed_form(cfg, h, 4);
    CAPTURE(k);
    CHECK(check_cocycle(cfg, s, 4).ok);
    CHECK(check_recursions(cfg, s).ok());
  }
}

TEST_CASE("recursion identities and kernel compatibility") {
  for (const auto& item : testgen::higgs_corpus(303, 30, 3, 2)) {
    CAPTURE(item.label);
    const Stratification s = stratification_from_higgs(item.cfg, item.h, 5);
    const RecursionReport rep = check_recursions(item.cfg, s);
    CHECK(rep.first.zero());
    CHECK(rep.second.zero());
  }
  // A v = 0 implies A_{n,0} v = 0: diagonal A with a zero entry.
  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    HiggsData h = zero_higgs(HiggsFlavor::AbsArith, 2, 0, pt);
    const Int a = 5 * uniform(rng, -20, 20), b = uniform(rng, -20, 20);
    // A = [[0, 5b], [0, a]] has kernel e_1.
    h.phi = mat(pt, {{0, 5 * b}, {0, a}});
    const Stratification s = stratification_from_higgs(cfg, h, 5);
    for (int n = 1; n <= 5; ++n) {
      const ChartMatrix& m = s.at({n, {}});
      CHECK(m(0, 0).is_zero());
      CHECK(m(1, 0).is_zero());
    }
  }
}

TEST_CASE("log_from_smooth") {
  const BaseConfig& cfg = unramified5();
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  const BaseConfig cfg2 = make_base_config(2, {-2, 0, 1}, 1, 8);
  const ChartCtx& pt2 = ChartCtx::point(*cfg2.ring);
  // (O_K, a E'(pi)) -> (O_K, a pi E'(pi)).
  for (Int a : {0, 1, 3, -2}) {
    HiggsData h = zero_higgs(HiggsFlavor::AbsArith, 1, 0, pt2, Twist::Smooth);
    h.phi(0, 0) = ChartElem(pt2, KElem(cfg2.dE.scaled(a)));
    const HiggsData out = log_from_smooth(cfg2, h);
    CHECK(out.twist == Twist::Log);
    CHECK(out.phi(0, 0) == ChartElem(pt2, KElem(cfg2.beta.scaled(a))));
  }
  const HiggsData z = log_from_smooth(cfg, zero_higgs(HiggsFlavor::AbsGeom, 2, 1, pt, Twist::Smooth));
  CHECK(is_zero(z.phi));

  // Smooth braid [Theta, A] = E'(pi) Theta with E'(pi) = 1.
  const HiggsData out = log_from_smooth(cfg, two_by_two(cfg, 1, Twist::Smooth));
  CHECK(out.phi == mat(pt, {{0, 0}, {0, 5}}));
  CHECK(validate_higgs(cfg, out).status == Status::Pass);

  try {
    log_from_smooth(cfg, two_by_two(cfg, 5, Twist::Smooth));
    FAIL("invalid smooth data accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationFailure);
  }
}

TEST_CASE("check_cocycle detects a perturbed coefficient") {
  std::mt19937_64 rng(404);
  for (const auto& item : testgen::higgs_corpus(404, 10, 3, 2)) {
    CAPTURE(item.label);
    Stratification s = stratification_from_higgs(item.cfg, item.h, 3);
    std::vector<StratKey> keys;
    for (const auto& [key, m] : s.coeffs)
      if (key.n + std::accumulate(key.I.begin(), key.I.end(), 0) > 0) keys.push_back(key);
    const StratKey& key = keys[uniform(rng, 0, static_cast<Int>(keys.size()) - 1)];
    CAPTURE(key.to_string());
    ChartMatrix& m = s.coeffs.at(key);
    m(0, 0) += ChartElem(*s.base, KElem(OkElem::from_int(*item.cfg.ring, item.cfg.ring->pow_p(1))));
    CHECK_FALSE(check_cocycle(item.cfg, s, 3).ok);
  }
}
