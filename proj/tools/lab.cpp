// lab: command-line front end for the Higgs / Galois laboratory.
//
//   lab check|stratify|cohomology|cocycle|factorize <descriptor.json> [flags]
//
// Exit codes: 0 pass, 1 failure (including malformed input), 2 undecided.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "htlab/io.hpp"

using namespace htlab;

namespace {

struct Options {
  std::string file;
  std::optional<int> precision;
  std::optional<int> pd_cutoff;
  std::optional<int> t_order;
  int samples = 20;
  std::uint64_t seed = 1;
  bool canonical = false;
  bool rational = false;
  std::string out;
};

struct Outcome {
  Status status = Status::Pass;
  Json result;
};

Json read_descriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

// The descriptor with command-line overrides folded into "config" / "unit".
Json effective_descriptor(Json d, const Options& o) {
  for (const char* section : {"config", "unit"}) {
    if (!d.contains(section)) continue;
    Json& c = d[section];
    if (o.precision) c["precision"] = *o.precision;
    if (std::string(section) == "config") {
      if (o.pd_cutoff) c["cutoffs"]["D"] = *o.pd_cutoff;
      if (o.t_order) c["cutoffs"]["T"] = *o.t_order;
    }
  }
  return d;
}

GroupElt random_group_elt(std::mt19937_64& rng, const BaseConfig& cfg, int d) {
  const Int m = cfg.ring->modulus();
  std::uniform_int_distribution<Int> any(0, m - 1);
  GroupElt s;
  for (int i = 0; i < d; ++i) s.n.push_back(any(rng));
  s.c = any(rng);
  do s.chi = any(rng);
  while (s.chi % cfg.p == 0);
  return s;
}

Status status_of(bool ok) { return ok ? Status::Pass : Status::Fail; }

Outcome cmd_check(const Json& d) {
  const BaseConfig cfg = config_from_json(d.at("config"));
  const HiggsData h = higgs_from_json(cfg, d.at("higgs"));
  const HiggsCertificate cert = validate_higgs(cfg, h);
  return {cert.status, Json{{"certificate", certificate_to_json(cert)}}};
}

Outcome cmd_stratify(const Json& d) {
  const BaseConfig cfg = config_from_json(d.at("config"));
  const HiggsData h = higgs_from_json(cfg, d.at("higgs"));
  const int D = cfg.cutoffs.D;
  const Stratification s = stratification_from_higgs(cfg, h, D);
  const CocycleReport cocycle = check_cocycle(cfg, s, D);
  const RecursionReport rec = check_recursions(cfg, s);
  const HiggsData back = higgs_from_stratification(cfg, s);
  bool roundtrip = back.theta.size() == h.theta.size() && (!h.has_phi() || back.phi == h.phi);
  for (std::size_t i = 0; roundtrip && i < h.theta.size(); ++i) roundtrip = back.theta[i] == h.theta[i];

  Json failing = Json::array();
  for (std::size_t k = 0; k < cocycle.failing.size() && k < 10; ++k) failing.push_back(cocycle.failing[k]);
  Json result{{"stratification", stratification_to_json(s)},
              {"cocycle", {{"ok", cocycle.ok}, {"residual", residual_to_json(cocycle.residual)}, {"failing", failing}}},
              {"recursions", {{"first", residual_to_json(rec.first)}, {"second", residual_to_json(rec.second)}}},
              {"roundtrip", roundtrip}};
  return {status_of(cocycle.ok && rec.ok() && roundtrip), result};
}

Outcome cmd_cohomology(const Json& d, const Options& o) {
  const BaseConfig cfg = config_from_json(d.at("config"));
  const HiggsData h = higgs_from_json(cfg, d.at("higgs"));
  const ComplexRep c = build_higgs_complex(cfg, h);
  const CohomologyReport r = cohomology_abs(cfg, h, o.rational || d.value("over_k", false));
  Json ranks = Json::array();
  for (const auto& t : c.terms) ranks.push_back(Json{{"rank", t.rank}, {"twist", t.twist}});
  return {status_of(r.verified), Json{{"complex", ranks}, {"cohomology", cohomology_to_json(r)}}};
}

Outcome cmd_cocycle(const Json& d, const Options& o) {
  const BaseConfig cfg = config_from_json(d.at("config"));
  const HiggsData h = higgs_from_json(cfg, d.at("higgs"));
  validate_higgs(cfg, h);
  const Int m = cfg.ring->modulus();
  const int T = cfg.cutoffs.T;
  std::mt19937_64 rng(o.seed);

  std::vector<GroupElt> elts;
  if (d.contains("group_elements"))
    for (const auto& g : d.at("group_elements")) {
      GroupElt s = group_from_json(g, m);
      if (static_cast<int>(s.n.size()) != h.d()) throw Error(ErrorKind::ParseError, "group element has the wrong d");
      if (s.chi % cfg.p == 0) throw Error(ErrorKind::NotAUnit, "chi must be a unit");
      elts.push_back(s);
    }
  else
    for (int k = 0; k < o.samples; ++k) elts.push_back(random_group_elt(rng, cfg, h.d()));

  Json matrices = Json::array();
  Residual first_order;
  for (const auto& s : elts) {
    matrices.push_back(Json{{"sigma", group_to_json(s)}, {"U", formal_matrix_to_json(cocycle_matrix(cfg, h, s, T))}});
    if (h.has_phi()) first_order.merge(sen_first_order(cfg, h, s));
  }
  std::vector<std::pair<GroupElt, GroupElt>> pairs;
  for (const auto& a : elts)
    for (const auto& b : elts) pairs.emplace_back(a, b);
  for (int k = 0; k < o.samples; ++k)
    pairs.emplace_back(random_group_elt(rng, cfg, h.d()), random_group_elt(rng, cfg, h.d()));
  const CocycleLawReport law = verify_cocycle_law(cfg, h, pairs, T);

  Json result{{"t_order", T}, {"matrices", matrices}};
  result["cocycle_law"] = Json{{"ok", law.ok}, {"pairs", law.pairs}, {"residual", residual_to_json(law.residual)}};
  if (h.has_phi()) {
    result["sen_operator"] = matrix_to_json(sen_operator(cfg, h));
    result["first_order"] = residual_to_json(first_order);
  }
  return {status_of(law.ok && first_order.zero()), result};
}

Outcome cmd_factorize(const Json& d) {
  const Json& u = d.at("unit");
  const WittRing& ring = WittRing::get(u.at("p").get<Int>(), u.value("f", 1), u.at("precision").get<int>());
  const std::vector<Int> coeffs = u.at("coeffs").get<std::vector<Int>>();
  const WittElem x = WittElem::from_coeffs(ring, coeffs);
  const Factorization f = teichmuller_factorize(x, u.value("horizon", ring.N() - 1));
  return {status_of(f.verified), Json{{"factorization", factorization_to_json(f)}}};
}

int run(const std::string& command, const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  Json report{{"schema_version", kSchemaVersion}, {"command", command}};
  Outcome outcome;
  int code = 0;
  try {
    const Json d = effective_descriptor(read_descriptor(o.file), o);
    report["input_digest"] = fnv1a_hex(command + "\n" + d.dump());
    if (command == "check") outcome = cmd_check(d);
    else if (command == "stratify") outcome = cmd_stratify(d);
    else if (command == "cohomology") outcome = cmd_cohomology(d, o);
    else if (command == "cocycle") outcome = cmd_cocycle(d, o);
    else outcome = cmd_factorize(d);
    code = outcome.status == Status::Pass ? 0 : (outcome.status == Status::Undecided ? 2 : 1);
    report["status"] = to_string(outcome.status);
    report["result"] = outcome.result;
  } catch (const Error& e) {
    code = 1;
    report["status"] = "fail";
    report["error"] = Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const nlohmann::json::exception& e) {
    code = 1;
    report["status"] = "fail";
    report["error"] = Json{{"kind", "ParseError"}, {"message", e.what()}};
  }
  report["exit_code"] = code;
  if (!o.canonical) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    report["elapsed_ms"] = ms.count();
  }

  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.out);
    if (!out) {
      std::cerr << "cannot write '" << o.out << "'\n";
      return 1;
    }
    out << text;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hodge-Tate crystal / Higgs module laboratory"};
  app.require_subcommand(1);
  Options o;
  std::string command;
  for (const char* name : {"check", "stratify", "cohomology", "cocycle", "factorize"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("descriptor", o.file, "JSON descriptor")->required();
    sub->add_option("--precision", o.precision, "p-adic precision N");
    sub->add_option("--pd-cutoff", o.pd_cutoff, "pd-degree cutoff D");
    sub->add_option("--t-order", o.t_order, "t-adic order T");
    sub->add_option("--samples", o.samples, "random samples for property checks")->capture_default_str();
    sub->add_option("--seed", o.seed, "seed for random samples")->capture_default_str();
    sub->add_flag("--canonical", o.canonical, "omit timing so output is byte-identical across runs");
    sub->add_flag("--rational", o.rational, "compute cohomology with K coefficients");
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->callback([&command, name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  return run(command, o);
}
