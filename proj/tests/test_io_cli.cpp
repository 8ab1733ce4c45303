#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "gen.hpp"
#include "htlab/io.hpp"

using namespace htlab;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult lab(const std::string& args) {
  static int counter = 0;
  const std::string out = "lab_test_output_" + std::to_string(counter++) + ".json";
  const std::string cmd = std::string(LAB_EXE) + " " + args + " > " + out + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  std::remove(out.c_str());
  return r;
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name + ".json"; }

bool throws_kind(ErrorKind kind, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("scalar and chart parsing") {
  const BaseConfig cfg = make_base_config(2, {-2, 0, 1}, 1, 6);
  const OkRing& ring = *cfg.ring;
  CHECK(scalar_from_json(ring, Json(3)) == KElem::from_int(ring, 3));
  CHECK(scalar_from_json(ring, Json("-7")) == KElem::from_int(ring, -7));
  CHECK(scalar_from_json(ring, Json("3/4")) == KElem::from_rational(ring, 3, 4));
  CHECK(scalar_from_json(ring, Json{{"pi_coeffs", {0, 1}}}) == KElem(cfg.pi()));
  CHECK(scalar_from_json(ring, Json{{"pi_coeffs", {1}}, {"p_shift", 1}}) == KElem::from_rational(ring, 1, 2));

  CHECK(throws_kind(ErrorKind::ParseError, [&] { scalar_from_json(ring, Json("1/0")); }));
  CHECK(throws_kind(ErrorKind::ParseError, [&] { scalar_from_json(ring, Json("abc")); }));
  CHECK(throws_kind(ErrorKind::ParseError, [&] { scalar_from_json(ring, Json{{"pi_coeffs", {1, 2, 3}}}); }));
  CHECK(throws_kind(ErrorKind::ParseError, [&] { scalar_from_json(ring, Json(1.5)); }));

  const ChartCtx& ctx = ChartCtx::get(ring, 1, 0, 3);
  const Json term = Json{{"terms", {{{"mono", {1, 0}}, {"coeff", 2}}}}};
  CHECK(chart_from_json(ctx, term) == ChartElem::variable(ctx, 0).scaled(2));
  CHECK(throws_kind(ErrorKind::ParseError, [&] { chart_from_json(ctx, Json{{"terms", {{{"mono", {1}}, {"coeff", 2}}}}}); }));
}

TEST_CASE("JSON roundtrip of configs, Higgs data and group elements") {
  std::mt19937_64 rng(3);
  for (const auto& item : testgen::higgs_corpus(12, 30, 3, 2)) {
    const BaseConfig cfg = config_from_json(config_to_json(item.cfg));
    CHECK(cfg.p == item.cfg.p);
    CHECK(cfg.E_coeffs == item.cfg.E_coeffs);
    CHECK(cfg.N == item.cfg.N);
    CHECK(cfg.cutoffs.D == item.cfg.cutoffs.D);
    const Json j = higgs_to_json(item.h);
    const HiggsData h = higgs_from_json(item.cfg, Json::parse(j.dump()));
    CAPTURE(item.label);
    CHECK(h.flavor == item.h.flavor);
    CHECK(h.integral == item.h.integral);
    REQUIRE(h.d() == item.h.d());
    for (int i = 0; i < h.d(); ++i) CHECK(h.theta[i] == item.h.theta[i]);
    if (h.has_phi()) CHECK(h.phi == item.h.phi);
    CHECK(higgs_to_json(h) == j);

    const GroupElt s = testgen::random_group_elt(rng, item.cfg, item.h.d());
    CHECK(group_equal(group_from_json(group_to_json(s), item.cfg.ring->modulus()), s, item.cfg.ring->modulus()));
  }
}

TEST_CASE("descriptor errors") {
  const BaseConfig cfg = make_base_config(5, {-5, 1}, 1, 8);
  CHECK(throws_kind(ErrorKind::ParseError, [&] { higgs_from_json(cfg, Json{{"rank", 1}}); }));
  CHECK(throws_kind(ErrorKind::ParseError, [&] { higgs_from_json(cfg, Json{{"flavor", "abs"}, {"rank", 1}}); }));
  CHECK(throws_kind(ErrorKind::ParseError, [&] {
    higgs_from_json(cfg, Json::parse(R"({"flavor": "abs-arith", "rank": 2, "phi": [[1, 0]]})"));
  }));
  CHECK(throws_kind(ErrorKind::ParseError, [&] {
    higgs_from_json(cfg, Json::parse(R"({"flavor": "rel-geom", "rank": 1, "theta": [[[0]]], "phi": [[0]]})"));
  }));
  CHECK(throws_kind(ErrorKind::NotEisenstein, [&] { config_from_json(Json::parse(R"({"p": 5, "E": [-3, 0, 1], "precision": 8})")); }));
  CHECK(throws_kind(ErrorKind::NotPrime, [&] { config_from_json(Json::parse(R"({"p": "6", "E": [-6, 1], "precision": 8})")); }));
  const BaseConfig c2 = config_from_json(Json::parse(R"({"p": "5", "E": ["-5", "1"], "precision": "6", "cutoffs": {"T": 4}})"));
  CHECK(c2.N == 6);
  CHECK(c2.cutoffs.T == 4);
  CHECK(c2.cutoffs.D == 5);
}

TEST_CASE("FNV-1a digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("pd element records") {
  const BaseConfig cfg = make_base_config(5, {-5, 1}, 1, 8);
  const ChartCtx& ctx = ChartCtx::point(*cfg.ring);
  const PdShape shape{PdVariant::AbsGeom, 1, 1, 3};
  const PdElement x = PdElement::x(shape, ctx, 1) + PdElement::y(shape, ctx, 1, 1).times(ChartElem(ctx, 4));
  const Json j = pd_to_json(x);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["mono"] == Json({1, 0}));
  CHECK(j[1]["mono"] == Json({0, 1}));
  CHECK(scalar_from_json(*cfg.ring, j[1]["coeff"]) == KElem::from_int(*cfg.ring, 4));
}

TEST_CASE("lab exit codes") {
  CHECK(lab("check " + sample("valid_2x2")).code == 0);
  const RunResult broken = lab("check " + sample("braid_broken") + " --canonical");
  CHECK(broken.code == 1);
  CHECK(Json::parse(broken.output)["error"]["kind"] == "BraidFailure");
  const RunResult undecided = lab("check " + sample("unit_phi") + " --canonical");
  CHECK(undecided.code == 2);
  CHECK(Json::parse(undecided.output)["status"] == "undecided");
  CHECK(lab("check /nonexistent.json").code == 1);
  CHECK(lab("frobnicate " + sample("valid_2x2")).code == 1);
}

TEST_CASE("lab subcommands") {
  const RunResult coh = lab("cohomology " + sample("arith_diag") + " --canonical");
  REQUIRE(coh.code == 0);
  const Json groups = Json::parse(coh.output)["result"]["cohomology"]["groups"];
  CHECK(groups[0]["free_rank"] == 1);
  CHECK(groups[1]["torsion"] == Json({1}));

  const RunResult coc = lab("cocycle " + sample("identity_cocycle") + " --canonical --samples 3");
  REQUIRE(coc.code == 0);
  const Json cj = Json::parse(coc.output)["result"];
  const BaseConfig cfg = make_base_config(5, {-5, 1}, 1, 8);
  const ChartCtx& pt = ChartCtx::point(*cfg.ring);
  const Json U = cj["matrices"][0]["U"];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 4; ++k)
        CHECK(chart_from_json(pt, U[i][j]["coeffs"][k]) == ChartElem(pt, i == j && k == 0 ? 1 : 0));
  CHECK(cj["cocycle_law"]["ok"] == true);
  CHECK(cj["cocycle_law"]["pairs"] == 4);

  const RunResult teich = lab("factorize " + sample("teichmuller_unit") + " --canonical");
  REQUIRE(teich.code == 0);
  CHECK(Json::parse(teich.output)["result"]["factorization"]["factors"].empty());
  const RunResult two = lab("factorize " + sample("unit_two") + " --canonical");
  CHECK(two.code == 0);
  CHECK(Json::parse(two.output)["result"]["factorization"]["verified"] == true);

  const RunResult strat = lab("stratify " + sample("valid_2x2") + " --canonical --pd-cutoff 3");
  REQUIRE(strat.code == 0);
  const Json sj = Json::parse(strat.output)["result"];
  CHECK(sj["stratification"]["D"] == 3);
  CHECK(sj["cocycle"]["ok"] == true);
  CHECK(sj["roundtrip"] == true);
}

TEST_CASE("lab output is deterministic in canonical mode") {
  for (const char* args : {"stratify ", "cocycle ", "cohomology "}) {
    const std::string cmd = std::string(args) + sample("valid_2x2") + " --canonical --seed 7 --samples 4";
    const RunResult a = lab(cmd), b = lab(cmd);
    CHECK(a.code == b.code);
    CHECK(a.output == b.output);
    CHECK(a.output.find("elapsed_ms") == std::string::npos);
  }
  const RunResult timed = lab("check " + sample("valid_2x2"));
  CHECK(timed.output.find("elapsed_ms") != std::string::npos);

  const RunResult p6 = lab("check " + sample("valid_2x2") + " --canonical --precision 6");
  const RunResult p8 = lab("check " + sample("valid_2x2") + " --canonical");
  CHECK(Json::parse(p6.output)["input_digest"] != Json::parse(p8.output)["input_digest"]);

  const std::string path = "lab_test_out_file.json";
  CHECK(lab("check " + sample("valid_2x2") + " --canonical --out " + path).code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == p8.output);
  std::remove(path.c_str());
}
