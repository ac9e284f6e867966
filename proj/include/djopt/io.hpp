#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "djopt/encodings.hpp"
#include "djopt/optimality.hpp"

namespace djopt {

using json = nlohmann::ordered_json;

constexpr const char* kProblemSchema = "djopt-problem/1";
constexpr const char* kReportSchema = "djopt-report/1";

struct ProblemFile {
  int vars = 0;
  std::string objective_text;
  Expr objective;
  std::vector<std::string> constraint_texts;
  std::vector<Expr> constraints;
  bool identity_constraints = false;  // "constraints" omitted: g(x) = x
  PolyhedralSet D;
  std::optional<EncodingSpec> encoding;
  Vec point;
  Tolerance tol;
  std::optional<double> kappa;
  std::uint64_t seed = 0x5EED;
  int depth = kCopositivityDefaultDepth;
  json source;
};

// Throws Error(SchemaError) with a JSON path, or SyntaxError for malformed
// JSON text and expressions (line/column in the file or in the expression).
ProblemFile parse_problem(const std::string& text);
ProblemFile problem_from_json(const json& j);

ProblemPoint to_problem_point(const ProblemFile& pf);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j, const std::string& path);
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j, Eigen::Index cols, const std::string& path);

json set_to_json(const PolyhedralSet& S);
PolyhedralSet set_from_json(const json& j, const std::string& path);

// Pieces with H-rep and, for cones, generators.
json cone_to_json(const PolyhedralCone& K, const Tolerance& tol = default_tolerance());
json cone_to_json(const ConvexPolyhedron& K, const Tolerance& tol = default_tolerance());

// Numbers are rounded to 12 significant digits; infinities become strings.
json number(double x);
json tagged(const ExtReal& x, const char* tag);
json tagged(const Vec& v, const char* tag);

}  // namespace djopt
