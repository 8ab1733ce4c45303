#include "htlab/io.hpp"

#include <charconv>
#include <cstdio>

namespace htlab {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

Int parse_int(const std::string& s) {
  Int v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || begin == end) parse_error("not a decimal integer: '" + s + "'");
  return v;
}

Int int_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return j.get<Int>();
  if (j.is_string()) return parse_int(j.get<std::string>());
  parse_error(what + " must be an integer or a decimal string");
}

Int int_field(const Json& j, const char* key, Int fallback) {
  if (!j.contains(key)) return fallback;
  return int_from_json(j.at(key), key);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

HiggsFlavor flavor_from_string(const std::string& s) {
  if (s == "abs-arith") return HiggsFlavor::AbsArith;
  if (s == "abs-geom") return HiggsFlavor::AbsGeom;
  if (s == "rel-geom") return HiggsFlavor::RelGeom;
  parse_error("unknown flavor '" + s + "'");
}

Json witt_to_json(const WittElem& x) {
  Json c = Json::array();
  for (int i = 0; i < x.ring().f(); ++i) c.push_back(x.coeff(i));
  return Json{{"coeffs", c}, {"prec", x.precision()}};
}

}  // namespace

BaseConfig config_from_json(const Json& j) {
  const Int p = int_from_json(field(j, "p"), "p");
  std::vector<Int> E;
  const Json& ej = field(j, "E");
  if (!ej.is_array()) parse_error("E must be a coefficient list, lowest degree first");
  for (const auto& c : ej) E.push_back(int_from_json(c, "E coefficient"));
  const int f = static_cast<int>(int_field(j, "f", 1));
  const int N = static_cast<int>(int_from_json(field(j, "precision"), "precision"));
  Cutoffs cut;
  if (j.contains("cutoffs")) {
    const Json& c = j.at("cutoffs");
    cut.D = static_cast<int>(int_field(c, "D", cut.D));
    cut.T = static_cast<int>(int_field(c, "T", cut.T));
    cut.Dy = static_cast<int>(int_field(c, "Dy", cut.Dy));
    cut.n_max = static_cast<int>(int_field(c, "n_max", cut.n_max));
    cut.s_max = static_cast<int>(int_field(c, "s_max", cut.s_max));
  }
  return make_base_config(p, E, f, N, cut);
}

Json config_to_json(const BaseConfig& cfg) {
  const Cutoffs& c = cfg.cutoffs;
  return Json{{"p", cfg.p},
              {"E", cfg.E_coeffs},
              {"f", cfg.f},
              {"precision", cfg.N},
              {"cutoffs", {{"D", c.D}, {"T", c.T}, {"Dy", c.Dy}, {"n_max", c.n_max}, {"s_max", c.s_max}}}};
}

KElem scalar_from_json(const OkRing& ring, const Json& j) {
  if (j.is_number_integer()) return KElem::from_int(ring, j.get<Int>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return KElem::from_int(ring, parse_int(s));
    const Int den = parse_int(s.substr(slash + 1));
    if (den == 0) parse_error("zero denominator in '" + s + "'");
    return KElem::from_rational(ring, parse_int(s.substr(0, slash)), den);
  }
  if (j.is_object() && j.contains("pi_coeffs")) {
    std::vector<Int> c;
    for (const auto& x : j.at("pi_coeffs")) c.push_back(int_from_json(x, "pi coefficient"));
    if (static_cast<int>(c.size()) > ring.e()) parse_error("more pi coefficients than the ramification index");
    c.resize(ring.e(), 0);
    const int prec = static_cast<int>(int_field(j, "prec", ring.full_precision()));
    return KElem(OkElem::from_coeffs(ring, c, prec), static_cast<int>(int_field(j, "p_shift", 0)));
  }
  parse_error("unrecognized scalar: " + j.dump());
}

Json scalar_to_json(const KElem& x) {
  Json c = Json::array();
  for (int i = 0; i < x.ring().e(); ++i) c.push_back(x.unit_part().coeff(i));
  return Json{{"pi_coeffs", c}, {"p_shift", x.shift()}, {"prec", x.unit_part().precision()}};
}

ChartElem chart_from_json(const ChartCtx& ctx, const Json& j) {
  if (!(j.is_object() && j.contains("terms"))) return ChartElem(ctx, scalar_from_json(ctx.ring(), j));
  ChartElem r(ctx);
  for (const auto& t : j.at("terms")) {
    Mono m{};
    const Json& mj = field(t, "mono");
    if (static_cast<int>(mj.size()) != ctx.num_vars()) parse_error("monomial has the wrong number of variables");
    for (std::size_t i = 0; i < mj.size(); ++i) m[i] = static_cast<std::int8_t>(int_from_json(mj[i], "exponent"));
    r += ChartElem::monomial(ctx, m, scalar_from_json(ctx.ring(), field(t, "coeff")));
  }
  return r;
}

Json chart_to_json(const ChartElem& x) {
  if (x.is_constant()) return scalar_to_json(x.constant());
  Json terms = Json::array();
  for (const auto& t : x.terms()) {
    Json m = Json::array();
    for (int i = 0; i < x.ctx().num_vars(); ++i) m.push_back(static_cast<int>(t.mono[i]));
    terms.push_back(Json{{"mono", m}, {"coeff", scalar_to_json(t.coeff)}});
  }
  return Json{{"terms", terms}};
}

ChartMatrix matrix_from_json(const ChartCtx& ctx, const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) parse_error("matrix must have " + std::to_string(rows) + " rows");
  ChartMatrix m = chart_zero(ctx, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) parse_error("matrix row must have " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = chart_from_json(ctx, j[i][k]);
  }
  return m;
}

Json matrix_to_json(const ChartMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(chart_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

HiggsData higgs_from_json(const BaseConfig& cfg, const Json& j) {
  const HiggsFlavor flavor = flavor_from_string(field(j, "flavor").get<std::string>());
  const std::string twist = j.value("twist", std::string("log"));
  if (twist != "log" && twist != "smooth") parse_error("twist must be 'log' or 'smooth'");
  const int rank = static_cast<int>(int_from_json(field(j, "rank"), "rank"));
  if (rank < 0) parse_error("negative rank");
  const ChartCtx* ctx = &ChartCtx::point(*cfg.ring);
  if (j.contains("base")) {
    const Json& b = j.at("base");
    const std::string mode = b.value("mode", std::string("point"));
    if (mode == "chart") {
      ctx = &ChartCtx::get(*cfg.ring, static_cast<int>(int_field(b, "d", 1)), static_cast<int>(int_field(b, "r", 0)),
                           cfg.cutoffs.Dy);
    } else if (mode != "point") {
      parse_error("base mode must be 'point' or 'chart'");
    }
  }
  const Json theta = j.value("theta", Json::array());
  HiggsData h = zero_higgs(flavor, rank, static_cast<int>(theta.size()), *ctx,
                           twist == "log" ? Twist::Log : Twist::Smooth);
  if (flavor == HiggsFlavor::AbsArith && !theta.empty()) parse_error("abs-arith data carries no theta");
  for (std::size_t i = 0; i < theta.size(); ++i) h.theta[i] = matrix_from_json(*ctx, theta[i], rank, rank);
  if (h.has_phi()) h.phi = matrix_from_json(*ctx, field(j, "phi"), rank, rank);
  else if (j.contains("phi")) parse_error("rel-geom data carries no phi");
  h.integral = j.value("integral", true);
  return h;
}

Json higgs_to_json(const HiggsData& h) {
  Json j{{"flavor", to_string(h.flavor)}, {"twist", to_string(h.twist)}, {"rank", h.rank}};
  if (h.base->is_point()) j["base"] = Json{{"mode", "point"}};
  else j["base"] = Json{{"mode", "chart"}, {"d", h.base->d()}, {"r", h.base->r()}};
  Json theta = Json::array();
  for (const auto& t : h.theta) theta.push_back(matrix_to_json(t));
  j["theta"] = theta;
  if (h.has_phi()) j["phi"] = matrix_to_json(h.phi);
  j["integral"] = h.integral;
  return j;
}

GroupElt group_from_json(const Json& j, Int modulus) {
  GroupElt s;
  for (const auto& x : j.value("n", Json::array())) s.n.push_back(zp::mod(int_from_json(x, "n"), modulus));
  s.c = zp::mod(int_field(j, "c", 0), modulus);
  s.chi = zp::mod(int_field(j, "chi", 1), modulus);
  return s;
}

Json group_to_json(const GroupElt& s) { return Json{{"n", s.n}, {"c", s.c}, {"chi", s.chi}}; }

Json formal_to_json(const FormalC& x) {
  Json c = Json::array();
  for (int k = 0; k < x.order(); ++k) c.push_back(chart_to_json(x.coeff(k)));
  return Json{{"t_order", x.order()}, {"coeffs", c}};
}

Json formal_matrix_to_json(const FormalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(formal_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Json pd_to_json(const PdElement& x) {
  Json terms = Json::array();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x.coeff(k).is_zero()) continue;
    Json m = Json::array();
    for (int v = 0; v < x.basis().num_vars(); ++v) m.push_back(static_cast<int>(x.basis().mono(k)[v]));
    terms.push_back(Json{{"mono", m}, {"coeff", chart_to_json(x.coeff(k))}});
  }
  return terms;
}

Json residual_to_json(const Residual& r) {
  Json j{{"nonzero", r.nonzero_count}};
  j["worst_valuation"] = r.worst_valuation ? Json(*r.worst_valuation) : Json(nullptr);
  j["first_witness"] = r.first_witness;
  return j;
}

Json certificate_to_json(const HiggsCertificate& c) {
  Json checks = Json::array();
  for (const auto& k : c.checks) checks.push_back(Json{{"name", k.name}, {"status", to_string(k.status)}, {"detail", k.detail}});
  Json j{{"status", to_string(c.status)}};
  j["n_star"] = c.n_star ? Json(*c.n_star) : Json(nullptr);
  j["target_precision"] = c.target_precision;
  j["last_valuation"] = c.last_valuation;
  j["checks"] = checks;
  return j;
}

Json stratification_to_json(const Stratification& s) {
  Json coeffs = Json::array();
  for (const auto& [key, m] : s.coeffs)
    coeffs.push_back(Json{{"key", key.to_string()}, {"n", key.n}, {"I", key.I}, {"matrix", matrix_to_json(m)}});
  return Json{{"flavor", to_string(s.flavor)}, {"twist", to_string(s.twist)}, {"rank", s.rank},
              {"d", s.d},                      {"D", s.D},                     {"coeffs", coeffs}};
}

Json cohomology_to_json(const CohomologyReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups)
    groups.push_back(Json{{"degree", g.degree}, {"free_rank", g.free_rank}, {"torsion", g.torsion}, {"description", g.to_string()}});
  return Json{{"over_k", r.over_k}, {"verified", r.verified}, {"groups", groups}};
}

Json factorization_to_json(const Factorization& f) {
  Json factors = Json::array();
  for (const auto& x : f.factors) factors.push_back(witt_to_json(x));
  return Json{{"a", f.a},
              {"teichmuller", witt_to_json(f.teichmuller_part)},
              {"y", witt_to_json(f.y)},
              {"factors", factors},
              {"verified_precision", f.verified_precision},
              {"verified", f.verified}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace htlab
