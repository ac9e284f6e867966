#include "djopt/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "djopt/error.hpp"
#include "djopt/io.hpp"
#include "djopt/oracles.hpp"

namespace djopt {

namespace {

constexpr double kDescentDelta = 1e-2;
constexpr double kEssentialDelta = 1e-2;
constexpr long kEssentialSamples = 10000;

struct Flags {
  std::string file;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<double> kappa;
  std::optional<int> depth;
  std::string at, direction;
  bool corrupt = false;
};

std::string fmt(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << std::setprecision(6) << v(i);
  os << ")";
  return os.str();
}

std::string fmt(const ExtReal& x) { return x.str(); }

Vec parse_list(const std::string& s, Eigen::Index n, const char* what) {
  std::vector<double> xs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::SchemaError, std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (static_cast<Eigen::Index>(xs.size()) != n)
    fail(ErrorCode::SchemaError, std::string(what) + ": expected " + std::to_string(n) + " comma-separated numbers");
  return Eigen::Map<Vec>(xs.data(), n);
}

// Generators, random combinations inside pieces and Gaussian vectors. Unlike
// cone_probes there are no near-boundary perturbations: the curve samplers
// only resolve directions down to their smallest step.
std::vector<Vec> sampling_probes(const PolyhedralCone& K, std::size_t count, std::uint64_t seed,
                                 const Tolerance& tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec> probes;
  std::vector<GeneratorRep> gens;
  for (const auto& P : K.pieces) gens.push_back(generators(P, tol));
  for (const auto& gr : gens) {
    for (const Vec& r : gr.rays) probes.push_back(r);
    for (const Vec& l : gr.lines) {
      probes.push_back(l);
      probes.push_back(-l);
    }
  }
  for (std::size_t k = 0; probes.size() < count; ++k) {
    Vec v = Vec::Zero(K.dim);
    if (!gens.empty() && k % 2 == 0) {
      const auto& gr = gens[(k / 2) % gens.size()];
      for (const Vec& r : gr.rays) v += std::abs(g(rng)) * r;
      for (const Vec& l : gr.lines) v += g(rng) * l;
    } else {
      v = Vec::NullaryExpr(K.dim, [&]() { return g(rng); });
    }
    if (linalg::inf_norm(v) > 0) probes.push_back(v);
  }
  return probes;
}

std::vector<Vec> directions_of(const GeneratorRep& g) {
  std::vector<Vec> out = g.rays;
  for (const Vec& l : g.lines) {
    out.push_back(l);
    out.push_back(-l);
  }
  return out;
}

// A point of S (projection of a Gaussian vector) or a Gaussian vector at
// max-norm distance >= 0.1 max(1, |s|) from S. Closer outside points are below
// the resolution of the curve samplers and say nothing about either side.
std::optional<Vec> draw_probe(const PolyhedralSet& S, bool member, std::mt19937_64& rng, const Tolerance& tol) {
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const Vec s = Vec::NullaryExpr(S.dim, [&]() { return g(rng); });
    const DistanceResult dr = distance_inf(S, s, tol);
    if (member) {
      if (dr.empty()) return std::nullopt;
      return dr.nearest;
    }
    if (dr.value >= 0.1 * std::max(1.0, linalg::inf_norm(s))) return s;
  }
  return std::nullopt;
}

ProblemFile load(const Flags& fl) {
  std::ifstream in(fl.file);
  if (!in) fail(ErrorCode::SchemaError, "cannot read '" + fl.file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ProblemFile pf = parse_problem(ss.str());
  if (fl.tol) {
    if (!(*fl.tol > 0)) fail(ErrorCode::SchemaError, "--tol must be positive");
    pf.tol.eps_feas = *fl.tol;
    pf.tol.eps_opt = *fl.tol;
    pf.tol.eps_zero = std::min(pf.tol.eps_zero, *fl.tol);
  }
  if (fl.kappa) {
    if (!(*fl.kappa > 0)) fail(ErrorCode::SchemaError, "--kappa must be positive");
    pf.kappa = fl.kappa;
  }
  if (fl.seed) pf.seed = *fl.seed;
  if (fl.depth) pf.depth = *fl.depth;
  return pf;
}

json tolerances(const Tolerance& t) {
  return {{"eps_feas", number(t.eps_feas)}, {"eps_zero", number(t.eps_zero)}, {"eps_opt", number(t.eps_opt)}};
}

json header(const char* command, const ProblemFile& pf) {
  json r;
  r["schema"] = kReportSchema;
  r["command"] = command;
  r["problem_file"] = pf.source;
  r["options"] = {{"tolerances", tolerances(pf.tol)},
                  {"seed", pf.seed},
                  {"depth", pf.depth},
                  {"kappa", pf.kappa ? number(*pf.kappa) : json(nullptr)}};
  return r;
}

json report_json(const CheckReport& c) {
  json o = {{"verdict", verdict_name(c.verdict)}};
  if (c.value) o["value"] = tagged(ExtReal(*c.value), "LP");
  if (c.witness) o["witness"] = vec_to_json(*c.witness);
  if (!c.detail.empty()) o["detail"] = c.detail;
  o["conditional"] = c.conditional;
  return o;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const Flags& fl, std::ostream& out, std::ostream& err) {
  const ProblemFile pf = load(fl);
  const Tolerance& tol = pf.tol;
  const ProblemPoint pp = to_problem_point(pf);
  json r = header("analyze", pf);
  r["point"] = {{"x", vec_to_json(pp.xbar)},
                {"f", tagged(ExtReal(pp.f.value(0)), "FORMULA")},
                {"grad_f", tagged(pp.grad_f(), "FORMULA")},
                {"g", tagged(pp.g.value, "FORMULA")}};

  const CriticalCone cc = critical_cone(pp, tol);
  r["critical_cone"] = cone_to_json(cc.pieces, tol);
  const Vec xstar = -pp.grad_f();
  bool violated = false, all_satisfied = true;
  json regions = json::array();
  std::ostringstream sum;
  sum << "analyze: " << cc.regions.size() << " critical region(s)\n";
  for (std::size_t i = 0; i < cc.regions.size(); ++i) {
    const Vec& u = cc.regions[i].rep;
    json reg = {{"direction", vec_to_json(u)}, {"closure", cone_to_json(cc.regions[i].closure, tol)}};
    const auto ds = DirectionalSystem::make(pp.system(), u, tol);
    const bool foscms = foscms_check(ds, tol).holds;
    const bool nondeg = nondegeneracy_check(ds, tol).holds;
    const bool gnd = generalized_nondegeneracy_check(ds, tol).holds;
    reg["cq"] = {{"foscms", foscms}, {"nondegeneracy", nondeg}, {"generalized_nondegeneracy", gnd}};

    const SecondSubderivative d2 = second_subderivative_gamma(ds, xstar, tol);
    const MultiplierBounds mb = multiplier_bounds(ds, xstar, pp.kappa, false, tol);
    json so = {{"d2_indicator", tagged(d2.value, "LP")},
               {"in_domain", d2.in_domain},
               {"multiplier_lower", tagged(mb.lower, "LP")},
               {"multiplier_upper", tagged(mb.upper, "LP")},
               {"s_multiplier_sup", tagged(mb.s_lower, "LP")},
               {"clipped", mb.clipped}};
    if (d2.multiplier) so["multiplier"] = tagged(*d2.multiplier, "LP");
    so["lower_support"] = gnd ? tagged(lower_support_T2_gamma(ds, xstar, tol), "FORMULA") : json(nullptr);
    reg["second_order"] = so;

    json nec;
    for (MultiplierMode mode : {MultiplierMode::M, MultiplierMode::S}) {
      const CheckReport c = necessary_check(pp, u, mode, tol);
      json cj = report_json(c);
      if (c.verdict == Verdict::Violated && !c.conditional) {
        violated = true;
        if (const auto x = descent_witness(pp, u, kDescentDelta, tol)) cj["descent_point"] = vec_to_json(*x);
      }
      if (c.verdict != Verdict::Satisfied) all_satisfied = false;
      nec[mode == MultiplierMode::M ? "M" : "S"] = cj;
      sum << "  region " << i << " u=" << fmt(u) << " necessary(" << (mode == MultiplierMode::M ? "M" : "S")
          << "): " << verdict_name(c.verdict);
      if (c.value) sum << " value " << *c.value << " [LP]";
      if (c.conditional) sum << " (conditional: FOSCMS fails)";
      sum << "\n";
    }
    reg["necessary"] = nec;
    regions.push_back(reg);
  }
  r["regions"] = regions;

  const CheckReport sc = sufficient_check(pp, pf.depth, tol);
  json suf = {{"verdict", verdict_name(sc.verdict)}};
  if (!sc.detail.empty()) suf["detail"] = sc.detail;
  json parts = json::array();
  for (const auto& p : sc.parts) {
    json pj = {{"verdict", verdict_name(p.verdict)}};
    if (!p.certificates.empty()) {
      pj["alpha"] = number(p.certificates[0].alpha);
      pj["lambda"] = tagged(p.certificates[0].lambda, "LP");
      pj["margin"] = tagged(ExtReal(p.margin), "FORMULA");
    }
    parts.push_back(pj);
  }
  suf["regions"] = parts;
  sum << "  sufficient: " << verdict_name(sc.verdict);
  if (sc.verdict == Verdict::Proven && std::isfinite(sc.margin)) {
    suf["margin"] = tagged(ExtReal(sc.margin), "FORMULA");
    const double eps = sc.margin / 2;
    const SamplingResult em = essential_min_oracle(pp, eps, kEssentialDelta, kEssentialSamples, pf.seed, tol);
    json ej = {{"holds", em.holds}, {"eps", number(eps)}, {"delta", number(kEssentialDelta)},
               {"samples", kEssentialSamples}, {"tag", "ESTIMATE"}};
    if (em.fails_at) ej["fails_at"] = vec_to_json(*em.fails_at);
    suf["essential_min"] = ej;
    sum << " (margin " << sc.margin << "; sampling " << (em.holds ? "holds" : "FAILS") << ")";
  }
  sum << "\n";
  r["sufficient"] = suf;

  if (pp.d() > 0) {
    try {
      const KappaEstimate k = kappa_oracle(DirectionalSystem::make(pp.system(), Vec::Zero(pp.n()), tol), tol);
      r["kappa"] = {{"value", number(k.kappa)}, {"tag", "ESTIMATE"}, {"pieces_skipped", k.pieces_skipped}};
    } catch (const Error& e) {
      r["kappa"] = {{"value", nullptr}, {"tag", "ESTIMATE"}, {"error", to_string(e.code())}};
    }
  }
  const char* overall = violated ? "Violated"
                        : sc.verdict == Verdict::Proven ? "Proven"
                        : all_satisfied                ? "Satisfied"
                                                       : "Unknown";
  r["verdict"] = overall;
  sum << "  verdict: " << overall << "\n";
  err << sum.str();
  if (fl.json) out << r.dump(2) << "\n";
  return violated ? kExitViolated : kExitOk;
}

// ---------------------------------------------------------------- cones

int cmd_cones(const Flags& fl, std::ostream& out, std::ostream& err) {
  const ProblemFile pf = load(fl);
  const Tolerance& tol = pf.tol;
  const Eigen::Index d = pf.D.dim;
  const Vec z = fl.at.empty() ? evaluate(pf.constraints, pf.point) : parse_list(fl.at, d, "--at");
  const Vec w = fl.direction.empty() ? Vec::Zero(d) : parse_list(fl.direction, d, "--direction");
  if (!contains(pf.D, z, tol)) {
    const DistanceResult dr = distance_inf(pf.D, z, tol);
    std::ostringstream os;
    os << "point " << fmt(z) << " is not in the set (max-norm distance " << dr.value << ")";
    fail(ErrorCode::PointNotInSet, os.str());
  }
  const DirectionalContext ctx{pf.D, z, w};
  json r = header("cones", pf);
  r["at"] = vec_to_json(z);
  r["direction"] = vec_to_json(w);
  const PolyhedralCone T = tangent_cone(pf.D, z, tol);
  const bool tangent = cone_contains(T, w, tol);
  r["direction_is_tangent"] = tangent;
  r["tangent"] = cone_to_json(T, tol);
  r["second_order_tangent"] = cone_to_json(second_order_tangent_set(ctx, tol), tol);
  r["regular_normal"] = cone_to_json(regular_normal_cone(pf.D, z, tol), tol);
  r["limiting_normal"] = cone_to_json(limiting_normal_cone(pf.D, z, tol), tol);
  r["directional_limiting_normal"] = cone_to_json(directional_limiting_normal_cone(ctx, tol), tol);
  r["directional_proximal_normal"] = cone_to_json(directional_proximal_normal_cone(ctx, tol), tol);
  r["clarke_directional_normal"] = cone_to_json(clarke_directional_normal_cone(ctx, tol), tol);
  r["directional_regular_tangent"] = cone_to_json(directional_regular_tangent_cone(ctx, tol), tol);
  r["tag"] = "FORMULA";
  err << "cones: z=" << fmt(z) << " w=" << fmt(w) << (tangent ? "" : " (w not tangent)") << "; T has "
      << T.pieces.size() << " piece(s), N has " << r["limiting_normal"]["pieces"].size() << " piece(s)\n";
  if (fl.json) out << r.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const Flags& fl, std::ostream& out, std::ostream& err) {
  const ProblemFile pf = load(fl);
  const Tolerance& tol = pf.tol;
  const Eigen::Index d = pf.D.dim;
  const Vec z = fl.at.empty() ? evaluate(pf.constraints, pf.point) : parse_list(fl.at, d, "--at");
  if (!contains(pf.D, z, tol)) fail(ErrorCode::PointNotInSet, "point is not in the set");
  SamplerConfig cfg;
  cfg.seed = pf.seed;
  cfg.probe_count = 200;

  PolyhedralCone T = tangent_cone(pf.D, z, tol);
  if (fl.corrupt) {
    // test hook: damage the closed form so the cross-check must notice
    if (T.pieces.size() > 1) {
      T.pieces.pop_back();
    } else if (!T.pieces.empty()) {
      auto& P = T.pieces.front();
      P.A = linalg::vstack(P.A, Mat(Mat::Identity(1, d)));
      P.b = Vec::Zero(P.A.rows());
    }
  }
  json checks = json::array();
  bool all = true;
  std::ostringstream sum;
  auto record = [&](const std::string& name, std::size_t probes, std::size_t bad, json extra = json::object()) {
    json c = {{"check", name}, {"probes", probes}, {"disagreements", bad}, {"agree", bad == 0}, {"tag", "ESTIMATE"}};
    for (auto& [k, v] : extra.items()) c[k] = v;
    checks.push_back(c);
    all = all && bad == 0;
    sum << "  " << name << ": " << probes << " probes, " << bad << " disagreement(s)\n";
  };

  const SetOracle O = polyhedral_oracle(pf.D, tol);
  {
    std::size_t bad = 0;
    const auto probes = sampling_probes(tangent_cone(pf.D, z, tol), 200, pf.seed, tol);
    for (const Vec& w : probes) bad += tangent_membership_oracle(O, z, w, cfg) != cone_contains(T, w, tol);
    record("tangent", probes.size(), bad);
  }
  std::vector<Vec> dirs{Vec::Zero(d)};
  for (const auto& P : T.pieces)
    for (const Vec& r : directions_of(generators(P, tol)))
      if (dirs.size() < 5) dirs.push_back(r);
  {
    std::mt19937_64 rng(pf.seed);
    std::size_t n = 0, bad = 0;
    for (const Vec& w : dirs) {
      const DirectionalContext ctx{pf.D, z, w};
      const PolyhedralCone T2 = second_order_tangent_set(ctx, tol);
      for (int k = 0; k < 20; ++k) {
        const auto s = draw_probe(T2, k % 2 == 0, rng, tol);
        if (!s) continue;
        ++n;
        bad += second_order_tangent_oracle(O, z, w, *s, cfg) != contains(T2, *s, tol);
      }
    }
    record("second_order_tangent", n, bad);
  }
  {
    std::size_t bad = 0;
    for (const Vec& w : dirs) {
      const DirectionalContext ctx{pf.D, z, w};
      const NormalLimitCheck c = check_normal_limit(normal_limit_oracle(pf.D, z, w, cfg, tol),
                                                    directional_limiting_normal_cone(ctx, tol), tol);
      bad += !c.agree();
    }
    record("directional_limiting_normal", dirs.size(), bad);
  }
  {
    std::size_t n = 0, bad = 0;
    json bands = json::array();
    for (const Vec& y : directions_of(merged_generators(limiting_normal_cone(pf.D, z, tol), tol))) {
      if (n >= 4) break;
      ++n;
      const ExtReal v = lower_generalized_support(pf.D, y, tol);
      const Band b = lower_support_oracle(pf.D, y, cfg, tol);
      const bool ok = b.contains(v, 1e-6);
      bad += !ok;
      bands.push_back({{"zstar", vec_to_json(y)}, {"formula", tagged(v, "FORMULA")},
                       {"band", {number(b.lo.as_double()), number(b.hi.as_double())}}, {"agree", ok}});
    }
    record("lower_support", n, bad, {{"bands", bands}});
  }
  if (!pf.identity_constraints && !pf.constraints.empty()) {
    const auto& G = pf.constraints;
    const SetOracle OG = gamma_oracle([&G](const Vec& x) { return evaluate(G, x); },
                                      [&G](const Vec& x) { return jacobian_at(G, x); }, pf.D, pf.vars, tol);
    const SystemPoint sp = make_system(G, pf.D, pf.point, pf.kappa);
    std::mt19937_64 rng(pf.seed + 1);
    std::size_t n = 0, bad = 0;
    int used = 0;
    for (const auto& P : linearization_cone(sp, tol).pieces)
      for (const Vec& u : directions_of(generators(P, tol))) {
        if (used >= 4) break;
        const auto ds = DirectionalSystem::make(sp, u, tol);
        if (!foscms_check(ds, tol).holds) continue;
        ++used;
        const PolyhedralSet T2 = second_order_tangent_gamma(ds, tol).set;
        for (int k = 0; k < 10; ++k) {
          const auto s = draw_probe(T2, k % 2 == 0, rng, tol);
          if (!s) continue;
          ++n;
          bad += second_order_tangent_oracle(OG, pf.point, u, *s, cfg) != contains(T2, *s, tol);
        }
      }
    record("gamma_second_order_tangent", n, bad);
  }

  json r = header("oracle", pf);
  r["at"] = vec_to_json(z);
  r["checks"] = checks;
  r["agree"] = all;
  err << "oracle: " << (all ? "all checks agree" : "DISAGREEMENT") << "\n" << sum.str();
  if (fl.json) out << r.dump(2) << "\n";
  return all ? kExitOk : kExitDisagreement;
}

// ---------------------------------------------------------------- verify-witness

int cmd_verify(const Flags& fl, std::ostream& out, std::ostream& err) {
  std::ifstream in(fl.file);
  if (!in) fail(ErrorCode::SchemaError, "cannot read '" + fl.file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json rep;
  try {
    rep = json::parse(ss.str());
  } catch (const json::parse_error&) {
    fail(ErrorCode::SchemaError, "report is not valid JSON");
  }
  if (!rep.is_object() || rep.value("schema", "") != kReportSchema || !rep.contains("problem_file"))
    fail(ErrorCode::SchemaError, std::string("expected a ") + kReportSchema + " report with an embedded problem_file");
  ProblemFile pf = problem_from_json(rep["problem_file"]);
  if (rep.contains("options") && rep["options"].contains("tolerances")) {
    const json& t = rep["options"]["tolerances"];
    pf.tol = Tolerance{t.value("eps_feas", 1e-8), t.value("eps_zero", 1e-10), t.value("eps_opt", 1e-8)};
  }
  const ProblemPoint pp = to_problem_point(pf);
  const double f0 = pp.objective.eval(pp.xbar);
  json results = json::array();
  bool all = true;
  if (rep.contains("regions"))
    for (std::size_t i = 0; i < rep["regions"].size(); ++i) {
      const json& reg = rep["regions"][i];
      for (const char* mode : {"M", "S"}) {
        if (!reg.contains("necessary") || !reg["necessary"].contains(mode)) continue;
        const json& c = reg["necessary"][mode];
        if (c.value("verdict", "") != "Violated" || !c.contains("witness")) continue;
        const Vec u = vec_from_json(c["witness"], "/regions/" + std::to_string(i) + "/necessary/" + mode + "/witness");
        const CheckReport again =
            necessary_check(pp, u, std::string(mode) == "M" ? MultiplierMode::M : MultiplierMode::S, pf.tol);
        json res = {{"region", i}, {"mode", mode}, {"kind", "necessary"}, {"confirmed", again.verdict == Verdict::Violated}};
        if (c.contains("descent_point")) {
          const Vec x = vec_from_json(c["descent_point"], "descent_point");
          const double dist = distance_inf(pp.D, evaluate(pp.constraints, x), pf.tol).value;
          const bool ok = dist <= 1e-10 * point_scale(x) && pp.objective.eval(x) < f0 && (x - pp.xbar).norm() <= kDescentDelta;
          res["descent_confirmed"] = ok;
          res["confirmed"] = res["confirmed"].get<bool>() && ok;
        }
        all = all && res["confirmed"].get<bool>();
        results.push_back(res);
      }
    }
  json r = {{"schema", kReportSchema}, {"command", "verify-witness"}, {"witnesses", results}, {"all_confirmed", all}};
  err << "verify-witness: " << results.size() << " witness(es), " << (all ? "all confirmed" : "NOT all confirmed") << "\n";
  if (fl.json) out << r.dump(2) << "\n";
  return all ? kExitOk : kExitDisagreement;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order variational analysis of disjunctive systems", "djopt"};
  app.require_subcommand(1);
  Flags fl;
  auto common = [&](CLI::App* s) {
    s->add_option("file", fl.file, "problem file (JSON)")->required();
    s->add_flag("--json", fl.json, "write the JSON report to stdout");
    s->add_option("--seed", fl.seed, "sampling seed");
    s->add_option("--tol", fl.tol, "feasibility/optimality tolerance");
    s->add_option("--kappa", fl.kappa, "subregularity modulus");
    s->add_option("--depth", fl.depth, "copositivity refinement depth");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "critical cone, constraint qualifications, optimality checks");
  CLI::App* cones = app.add_subcommand("cones", "tangent and normal cones of the set");
  CLI::App* oracle = app.add_subcommand("oracle", "sampling cross-checks of the closed forms");
  CLI::App* verify = app.add_subcommand("verify-witness", "re-check the witnesses in an analyze report");
  for (CLI::App* s : {analyze, cones, oracle, verify}) common(s);
  for (CLI::App* s : {cones, oracle}) s->add_option("--at", fl.at, "point of the set, comma separated");
  cones->add_option("--direction", fl.direction, "direction, comma separated");
  oracle->add_flag("--corrupt-cache", fl.corrupt)->group("");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "djopt: " << e.what() << "\n" << app.help();
    return kExitSchema;
  }
  try {
    if (*analyze) return cmd_analyze(fl, out, err);
    if (*cones) return cmd_cones(fl, out, err);
    if (*oracle) return cmd_oracle(fl, out, err);
    return cmd_verify(fl, out, err);
  } catch (const SyntaxError& e) {
    err << "djopt: " << e.what() << " (expected " << e.expected() << ")\n";
    return kExitSchema;
  } catch (const Error& e) {
    err << "djopt: " << e.what() << "\n";
    return kExitSchema;
  }
}

}  // namespace djopt
