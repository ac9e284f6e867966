#include "djopt/io.hpp"

#include <cmath>
#include <cstdio>

#include "djopt/error.hpp"

namespace djopt {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorCode::SchemaError, (path.empty() ? "/" : path) + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) schema(path, std::string("missing field '") + key + "'");
  return j.at(key);
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

Expr parse_expr_at(const std::string& text, const std::string& path) {
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.line(), e.column(), e.expected(), path + ": " + e.what());
  }
}

}  // namespace

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (std::abs(x) < 1e-12) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

json mat_to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i).transpose()));
  return a;
}

Vec vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = num(j[i], path + "/" + std::to_string(i));
  return v;
}

Mat mat_from_json(const json& j, Eigen::Index cols, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of rows");
  Mat m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    const Vec r = vec_from_json(j[i], p);
    if (r.size() != cols) schema(p, "row length " + std::to_string(r.size()) + ", expected " + std::to_string(cols));
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

json set_to_json(const PolyhedralSet& S) {
  json pieces = json::array();
  for (const auto& P : S.pieces)
    pieces.push_back({{"A", mat_to_json(P.A)}, {"b", vec_to_json(P.b)}, {"E", mat_to_json(P.E)}, {"f", vec_to_json(P.f)}});
  return {{"dim", S.dim}, {"pieces", pieces}};
}

PolyhedralSet set_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  const int n = integer(field(j, "dim", path), path + "/dim");
  if (n < 0) schema(path + "/dim", "must be nonnegative");
  const json& ps = field(j, "pieces", path);
  if (!ps.is_array()) schema(path + "/pieces", "expected an array");
  PolyhedralSet S(n);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string p = path + "/pieces/" + std::to_string(i);
    const json& q = ps[i];
    if (!q.is_object()) schema(p, "expected an object");
    for (const auto& [k, v] : q.items())
      if (k != "A" && k != "b" && k != "E" && k != "f") schema(p, "unknown field '" + k + "'");
    const Mat A = q.contains("A") ? mat_from_json(q["A"], n, p + "/A") : Mat(0, n);
    const Vec b = q.contains("b") ? vec_from_json(q["b"], p + "/b") : Vec(0);
    const Mat E = q.contains("E") ? mat_from_json(q["E"], n, p + "/E") : Mat(0, n);
    const Vec f = q.contains("f") ? vec_from_json(q["f"], p + "/f") : Vec(0);
    if (b.size() != A.rows()) schema(p + "/b", "length must equal the number of rows of A");
    if (f.size() != E.rows()) schema(p + "/f", "length must equal the number of rows of E");
    ConvexPolyhedron P(A, b, E, f);
    P.dim = n;
    S.pieces.push_back(std::move(P));
  }
  return S;
}

json cone_to_json(const ConvexPolyhedron& P, const Tolerance& tol) {
  json o = {{"A", mat_to_json(P.A)}, {"b", vec_to_json(P.b)}, {"E", mat_to_json(P.E)}, {"f", vec_to_json(P.f)}};
  if (P.is_cone() && P.dim > 0) {
    try {
      const GeneratorRep g = generators(P, tol);
      json rays = json::array(), lines = json::array();
      for (const Vec& r : g.rays) rays.push_back(vec_to_json(r));
      for (const Vec& l : g.lines) lines.push_back(vec_to_json(l));
      o["rays"] = rays;
      o["lines"] = lines;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ScaleCapExceeded) throw;
    }
  }
  return o;
}

json cone_to_json(const PolyhedralCone& K, const Tolerance& tol) {
  json pieces = json::array();
  for (const auto& P : K.pieces) pieces.push_back(cone_to_json(P, tol));
  return {{"dim", K.dim}, {"pieces", pieces}};
}

json tagged(const ExtReal& x, const char* tag) { return {{"value", number(x.as_double())}, {"tag", tag}}; }
json tagged(const Vec& v, const char* tag) { return {{"value", vec_to_json(v)}, {"tag", tag}}; }

ProblemFile problem_from_json(const json& j) {
  if (!j.is_object()) schema("", "expected an object");
  static const char* known[] = {"schema", "vars", "objective", "constraints", "set", "point", "options"};
  for (const auto& [k, v] : j.items())
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) schema("", "unknown field '" + k + "'");
  if (j.contains("schema") && j["schema"] != kProblemSchema)
    schema("/schema", std::string("expected \"") + kProblemSchema + "\"");
  ProblemFile pf;
  pf.source = j;
  pf.vars = integer(field(j, "vars", ""), "/vars");
  if (pf.vars < 1 || pf.vars > 32) schema("/vars", "must be between 1 and 32");

  pf.objective_text = j.contains("objective") ? std::string() : "0";
  if (j.contains("objective")) {
    if (!j["objective"].is_string()) schema("/objective", "expected an expression string");
    pf.objective_text = j["objective"].get<std::string>();
  }
  pf.objective = parse_expr_at(pf.objective_text, "/objective");
  if (pf.objective.max_var() > pf.vars) schema("/objective", "uses a variable beyond x" + std::to_string(pf.vars));

  if (j.contains("constraints")) {
    const json& c = j["constraints"];
    if (!c.is_array()) schema("/constraints", "expected an array of expression strings");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string p = "/constraints/" + std::to_string(i);
      if (!c[i].is_string()) schema(p, "expected an expression string");
      pf.constraint_texts.push_back(c[i].get<std::string>());
      pf.constraints.push_back(parse_expr_at(pf.constraint_texts.back(), p));
      if (pf.constraints.back().max_var() > pf.vars) schema(p, "uses a variable beyond x" + std::to_string(pf.vars));
    }
  } else {
    pf.identity_constraints = true;
    for (int i = 1; i <= pf.vars; ++i) {
      pf.constraints.push_back(Expr::var(i));
      pf.constraint_texts.push_back("x" + std::to_string(i));
    }
  }

  const json& s = field(j, "set", "");
  if (!s.is_object()) schema("/set", "expected an object");
  if (s.contains("kind")) {
    if (!s["kind"].is_string()) schema("/set/kind", "expected a string");
    EncodingSpec spec;
    spec.kind = encoding_kind_from_string(s["kind"].get<std::string>());
    switch (spec.kind) {
      case EncodingKind::MPCC:
      case EncodingKind::Switching:
      case EncodingKind::Vanishing: spec.pairs = integer(field(s, "pairs", "/set"), "/set/pairs"); break;
      case EncodingKind::Cardinality:
        spec.n = integer(field(s, "n", "/set"), "/set/n");
        spec.nonzeros = integer(field(s, "nonzeros", "/set"), "/set/nonzeros");
        break;
      case EncodingKind::Box:
        spec.lower = vec_from_json(field(s, "lower", "/set"), "/set/lower");
        spec.upper = vec_from_json(field(s, "upper", "/set"), "/set/upper");
        break;
      case EncodingKind::CustomUnion: spec.custom = set_from_json(field(s, "union", "/set"), "/set/union"); break;
    }
    try {
      pf.D = build(spec);
    } catch (const Error& e) {
      schema("/set", e.what());
    }
    pf.encoding = spec;
  } else {
    pf.D = set_from_json(s, "/set");
  }
  if (static_cast<std::size_t>(pf.D.dim) != pf.constraints.size())
    schema("/set", "dimension " + std::to_string(pf.D.dim) + " differs from the number of constraints (" +
                       std::to_string(pf.constraints.size()) + ")");

  pf.point = j.contains("point") ? vec_from_json(j["point"], "/point") : Vec::Zero(pf.vars);
  if (pf.point.size() != pf.vars) schema("/point", "length must equal vars");

  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) schema("/options", "expected an object");
    for (const auto& [k, v] : o.items()) {
      const std::string p = "/options/" + k;
      if (k == "eps_feas") pf.tol.eps_feas = num(v, p);
      else if (k == "eps_zero") pf.tol.eps_zero = num(v, p);
      else if (k == "eps_opt") pf.tol.eps_opt = num(v, p);
      else if (k == "kappa") pf.kappa = num(v, p);
      else if (k == "seed") {
        if (!v.is_number_unsigned()) schema(p, "expected a nonnegative integer");
        pf.seed = v.get<std::uint64_t>();
      } else if (k == "depth") pf.depth = integer(v, p);
      else schema("/options", "unknown option '" + k + "'");
    }
    try {
      pf.tol.validate();
    } catch (const Error& e) {
      schema("/options", e.what());
    }
    if (pf.kappa && !(*pf.kappa > 0)) schema("/options/kappa", "must be positive");
    if (pf.depth < 0) schema("/options/depth", "must be nonnegative");
  }
  return pf;
}

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw SyntaxError(line, col, "valid JSON", "malformed JSON at line " + std::to_string(line) + ", column " +
                                                   std::to_string(col));
  }
  return problem_from_json(j);
}

ProblemPoint to_problem_point(const ProblemFile& pf) {
  return make_problem(pf.objective, pf.constraints, pf.D, pf.point, pf.kappa);
}

}  // namespace djopt
