#include "pshc/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pshc {

namespace {

Json number_or_null(std::optional<Scalar> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Json range_json(const Range& r) { return Json{{"min", r.min}, {"max", r.max}}; }

bool is_supported(const std::string& family) {
  try {
    parse_family(family);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Json params_json(const std::vector<int>& p) {
  Json a = Json::array();
  for (int v : p) a.push_back(v);
  return a;
}

IdentityResult single_check(const std::string& name, Scalar residual, Scalar tol) {
  IdentityResult r;
  r.name = name;
  r.trials = 1;
  r.max_residual = residual;
  r.min_residual = residual;
  r.pass = std::isfinite(residual) && residual <= tol;
  return r;
}

Json result_json(const IdentityResult& r) {
  return Json{{"identity", r.name},
              {"trials", r.trials},
              {"max_residual", number_or_null(r.max_residual)},
              {"min_residual", number_or_null(r.min_residual)},
              {"worst_seed", r.worst_seed},
              {"pass", r.pass}};
}

Json results_block(const std::string& suite, const std::vector<IdentityResult>& rs, Scalar tol) {
  Json j{{"suite", suite}, {"tol", tol}};
  bool ok = true;
  Json arr = Json::array();
  for (const auto& r : rs) {
    arr.push_back(result_json(r));
    ok = ok && r.pass;
  }
  j["pass"] = ok;
  j["results"] = std::move(arr);
  return j;
}

// Aggregate a lemma relation over seeds x trials into one result.
IdentityResult lemma_result(const std::string& name, const RunConfig& cfg, int d, bool torsion_lemma) {
  SpacePtr s = make_space(d, torsion_lemma);
  IdentityResult r;
  r.name = name;
  r.min_residual = std::numeric_limits<Scalar>::infinity();
  bool first = true;
  for (std::uint64_t seed : cfg.seeds)
    for (int t = 0; t < cfg.trials; ++t) {
      std::uint64_t sd = seed * 1000003ULL + static_cast<std::uint64_t>(t);
      Scalar res = torsion_lemma ? torsion_relation_residual(s, 3, sd, cfg.negative_control)
                                 : operator_relation_residual(s, 3, sd, cfg.negative_control);
      if (first || res > r.max_residual) {
        r.max_residual = res;
        r.worst_seed = sd;
      }
      r.min_residual = std::min(r.min_residual, res);
      first = false;
      ++r.trials;
    }
  r.pass = r.max_residual <= cfg.tol;
  return r;
}

std::vector<IdentityResult> model_checks(const ModelSpec& spec, Scalar tol) {
  LieModel m = build_model(parse_family(spec.family), spec.params);
  Curv4 rw = model_curvature(m);
  std::vector<IdentityResult> out;
  out.push_back(single_check("bianchi", bianchi_map(rw).max_abs(), tol));
  out.push_back(single_check("j_invariance", j_project(rw, -1).max_abs(), tol));
  out.push_back(single_check("first_bianchi", first_bianchi_residual(assemble_rh(rw), rw.space()), tol));
  if (m.d >= 2) {
    InvariantReport inv = invariants(rw, tol);
    Scalar pe = std::max(inv.ric0.m.cwiseAbs().maxCoeff(), inv.rho0.m.cwiseAbs().maxCoeff());
    out.push_back(single_check("pseudo_einstein", pe, tol));
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
}

std::vector<int> parse_params(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad parameter list: " + text);
    }
    if (pos != item.size()) throw std::invalid_argument("bad parameter list: " + text);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty parameter list");
  return out;
}

std::vector<ModelSpec> default_table_rows() {
  return {{"su_pq", {1, 1}},     {"su_pq", {2, 1}},  {"su_pq", {2, 2}},    {"su_pq", {3, 1}},
          {"sp_p_R", {1}},       {"sp_p_R", {2}},    {"sp_p_R", {3}},      {"so_p_2", {3}},
          {"so_p_2", {4}},       {"so_star_2p", {3}}, {"so_star_2p", {4}}, {"heisenberg", {3}},
          {"e6_minus14", {}},    {"e7_minus25", {}}};
}

std::vector<ModelSpec> default_verify_models() {
  return {{"su_pq", {2, 1}}, {"su_pq", {2, 2}}, {"sp_p_R", {2}}, {"so_p_2", {3}}, {"heisenberg", {2}}};
}

Json cmd_table(const RunConfig& cfg) {
  cfg.validate();
  const auto rows = cfg.models.empty() ? default_table_rows() : cfg.models;
  Json arr = Json::array();
  for (const auto& spec : rows) {
    Json row{{"family", spec.family}, {"params", params_json(spec.params)}};
    if (!is_supported(spec.family)) {
      row["status"] = "out_of_scope";
      arr.push_back(std::move(row));
      continue;
    }
    Family fam = parse_family(spec.family);
    LieModel m = build_model(fam, spec.params);
    Curv4 rw = model_curvature(m);
    Scalar s = ricci_contraction(rw).m.trace();
    std::optional<Scalar> c0;
    if (!m.flat) c0 = c0_prime(rw);
    Scalar k = kappa(rw);
    auto cf = closed_form(fam, spec.params);
    row["status"] = "ok";
    row["d"] = m.d;
    row["flat"] = m.flat;
    row["s"] = s;
    row["c0_prime"] = number_or_null(c0);
    row["kappa"] = k;
    row["c0_prime_closed_form"] = cf ? Json(cf->c0_prime) : Json(nullptr);
    row["kappa_closed_form"] = cf ? Json(cf->kappa) : Json(nullptr);
    row["c0_prime_abs_diff"] = (cf && c0) ? Json(std::abs(*c0 - cf->c0_prime)) : Json(nullptr);
    row["kappa_abs_diff"] = cf ? Json(std::abs(k - cf->kappa)) : Json(nullptr);
    row["c0_prime_plus_kappa"] = c0 ? Json(*c0 + k) : Json(nullptr);
    arr.push_back(std::move(row));
  }
  return Json{{"schema_version", kSchemaVersion}, {"command", "table"}, {"rows", std::move(arr)}};
}

Json cmd_model(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.models.empty()) throw std::invalid_argument("model: --family and --params are required");
  Json arr = Json::array();
  for (const auto& spec : cfg.models) {
    Family fam = parse_family(spec.family);
    LieModel m = build_model(fam, spec.params);
    Curv4 rw = model_curvature(m);
    Scalar s = ricci_contraction(rw).m.trace();
    Json b{{"family", spec.family}, {"params", params_json(spec.params)}, {"d", m.d}, {"s", s}};
    b["c0_prime"] = m.flat ? Json(nullptr) : Json(c0_prime(rw));
    b["kappa"] = kappa(rw);
    if (m.d >= 2) {
      InvariantReport inv = invariants(rw, cfg.tol);
      b["cm_norm2"] = inv.cm_norm2;
      b["pseudo_einstein"] = inv.pseudo_einstein;
    } else {
      // In real dimension 2 the Chern-Moser part is void and the Ricci form is a multiple of omega.
      b["cm_norm2"] = 0.0;
      b["pseudo_einstein"] = true;
    }
    CurvatureRanges cr = sample_curvatures(rw, cfg.samples, cfg.seeds.front());
    b["curvature_ranges"] = Json{{"samples", cr.samples},
                                 {"sectional", range_json(cr.sectional)},
                                 {"holomorphic_sectional", range_json(cr.holomorphic)},
                                 {"complex_sectional", range_json(cr.complex_sectional)}};
    arr.push_back(std::move(b));
  }
  return Json{{"schema_version", kSchemaVersion}, {"command", "model"}, {"models", std::move(arr)}};
}

Json suite_to_json(const SuiteReport& r) {
  Json j{{"suite", "pointwise_identities"}, {"d", r.d},       {"d_prime", r.d_prime},
         {"fiber_dim", r.fiber_dim},        {"seed", r.seed}, {"negative_control", r.negative_control},
         {"tol", r.tol},                    {"pass", r.all_pass()}};
  Json arr = Json::array();
  for (const auto& x : r.results) arr.push_back(result_json(x));
  j["results"] = std::move(arr);
  return j;
}

VerifyOutcome cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  VerifyOutcome out;
  bool pass = true;
  Json suites = Json::array();

  std::vector<IdentityResult> lemmas;
  for (int d : {2, 3, 4}) {
    lemmas.push_back(lemma_result("operator_relations_d" + std::to_string(d), cfg, d, false));
    lemmas.push_back(lemma_result("torsion_relations_d" + std::to_string(d), cfg, d, true));
  }
  Json lj = results_block("lemma_relations", lemmas, cfg.tol);
  pass = pass && lj["pass"].get<bool>();
  suites.push_back(std::move(lj));

  const auto models = cfg.models.empty() ? default_verify_models() : cfg.models;
  for (const auto& spec : models) {
    std::string label = spec.family;
    for (int p : spec.params) label += "_" + std::to_string(p);
    Json mj = results_block("model_curvature:" + label, model_checks(spec, cfg.tol), cfg.tol);
    pass = pass && mj["pass"].get<bool>();
    suites.push_back(std::move(mj));
  }

  std::vector<IdentityResult> torsion;
  for (int d : {2, 3}) {
    SpacePtr sp = make_space(d, true);
    const Scalar s = -2.0 * d;
    TorsionModel tm = torsion_curvature(sp, s);
    std::string sfx = "_d" + std::to_string(d);
    torsion.push_back(single_check("first_bianchi" + sfx, first_bianchi_residual(assemble_rh(tm.rw), sp), cfg.tol));
    torsion.push_back(single_check("tau_conjugation" + sfx, tau_conjugation_residual(tm.rw, s), cfg.tol));
    torsion.push_back(single_check("torsion_part" + sfx,
                                   max_abs_diff(assemble_rh(tm.rw) - tm.rw, torsion_part_closed_form(sp)),
                                   cfg.tol));
  }
  Json tj = results_block("torsion_model", torsion, cfg.tol);
  pass = pass && tj["pass"].get<bool>();
  suites.push_back(std::move(tj));

  for (auto [d, dp] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}})
    for (std::uint64_t seed : cfg.seeds) {
      SuiteReport r = identity_suite(d, dp, 3, seed, cfg.trials, cfg.negative_control, cfg.tol);
      pass = pass && r.all_pass();
      suites.push_back(suite_to_json(r));
    }

  Json seeds = Json::array();
  for (auto s : cfg.seeds) seeds.push_back(s);
  out.doc = Json{{"schema_version", kSchemaVersion},
                 {"command", "verify"},
                 {"seeds", std::move(seeds)},
                 {"trials", cfg.trials},
                 {"tol", cfg.tol},
                 {"negative_control", cfg.negative_control},
                 {"pass", pass},
                 {"suites", std::move(suites)}};
  out.pass = pass;
  return out;
}

std::string serialize(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace pshc
