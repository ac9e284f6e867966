#include <doctest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "djopt/error.hpp"
#include "djopt/optimality.hpp"

using namespace djopt;
using namespace djopt::testing;

namespace {

std::vector<Expr> identity_map(int n) {
  std::vector<Expr> out;
  for (int i = 1; i <= n; ++i) out.push_back(Expr::var(i));
  return out;
}

PolyhedralSet ray_x1() {
  return PolyhedralSet(ConvexPolyhedron(mat(1, 2, {-1, 0}), vec({0}), mat(1, 2, {0, 1}), vec({0})));
}

PolyhedralSet whole(int d) { return PolyhedralSet(ConvexPolyhedron::whole(d)); }

ConvexPolyhedron orthant(int n) {
  return ConvexPolyhedron::cone(-Mat::Identity(n, n), Mat(0, n));
}

}  // namespace

TEST_CASE("critical cone examples") {
  const ProblemPoint a = make_problem(parse("x1^2 + x2^2"), identity_map(2), dcomp(), Vec::Zero(2));
  const CriticalCone ca = critical_cone(a);
  CHECK(compare_cones(ca.pieces, dcomp(), cone_probes(ca.pieces, dcomp(), 300, 1)).agree());
  // two open rays plus the origin-free pattern set
  CHECK(ca.regions.size() == 2);

  const ProblemPoint b = make_problem(parse("x1"), identity_map(2), dcomp(), Vec::Zero(2));
  const CriticalCone cb = critical_cone(b);
  CHECK(cone_contains(cb.pieces, vec({0, -1})));
  CHECK_FALSE(cone_contains(cb.pieces, vec({1, 0})));
  CHECK_FALSE(cone_contains(cb.pieces, vec({0, 1})));
  REQUIRE(cb.regions.size() == 1);
  CHECK(cb.regions[0].rep.isApprox(vec({0, -1})));

  const ProblemPoint c = make_problem(parse("x1 + 2*x2"), identity_map(2), whole(2), Vec::Zero(2));
  const CriticalCone cw = critical_cone(c);
  CHECK(cone_contains(cw.pieces, vec({-1, 0})));
  CHECK(cone_contains(cw.pieces, vec({2, -1})));
  CHECK_FALSE(cone_contains(cw.pieces, vec({1, 0})));
  CHECK(cw.regions.size() == 2);
}

TEST_CASE("necessary condition examples") {
  const ProblemPoint a = make_problem(parse("-x1^2"), identity_map(2), ray_x1(), Vec::Zero(2));
  const CheckReport ra = necessary_check(a, vec({1, 0}), MultiplierMode::M);
  CHECK(ra.verdict == Verdict::Violated);
  REQUIRE(ra.value);
  CHECK(*ra.value == doctest::Approx(-2.0));
  CHECK_FALSE(ra.conditional);
  CHECK(necessary_check(a, vec({1, 0}), MultiplierMode::S).verdict == Verdict::Violated);

  const ProblemPoint b = make_problem(parse("x1^2 + x2^2"), identity_map(2), dcomp(), Vec::Zero(2));
  for (const Vec& u : {vec({1, 0}), vec({0, -1}), vec({0, 0})})
    CHECK(necessary_check(b, u, MultiplierMode::M).verdict == Verdict::Satisfied);

  // nondegenerate, unique multiplier (0, -1)
  const ProblemPoint c = make_problem(parse("x2 - x1^2"), identity_map(2), dcomp(), Vec::Zero(2));
  const CheckReport rc = necessary_check(c, vec({1, 0}), MultiplierMode::S);
  CHECK(rc.verdict == Verdict::Violated);
  CHECK(*rc.value == doctest::Approx(-2.0));
  // first-order descent: no multiplier
  const CheckReport rc2 = necessary_check(c, vec({0, -1}), MultiplierMode::S);
  CHECK(rc2.verdict == Verdict::Violated);
  CHECK_FALSE(rc2.value);

  CHECK_THROWS_AS(necessary_check(c, vec({1, 1}), MultiplierMode::M), Error);
}

TEST_CASE("descent witnesses for violated necessary conditions") {
  const ProblemPoint a = make_problem(parse("-x1^2"), identity_map(2), ray_x1(), Vec::Zero(2));
  const auto x = descent_witness(a, vec({1, 0}), 1e-2);
  REQUIRE(x);
  CHECK(a.objective.eval(*x) < 0);
  CHECK(x->norm() <= 1e-2);

  // curved constraint: g = (x1, x2 - x1^2), f = -x2, u = (1, 0)
  const ProblemPoint b = make_problem(parse("-x2"), {parse("x1"), parse("x2 - x1^2")}, dcomp(), Vec::Zero(2));
  CHECK(necessary_check(b, vec({1, 0}), MultiplierMode::M).verdict == Verdict::Violated);
  const auto y = descent_witness(b, vec({1, 0}), 1e-2);
  REQUIRE(y);
  CHECK(b.objective.eval(*y) < 0);
}

TEST_CASE("copositivity examples") {
  const ConvexPolyhedron P = orthant(2);
  const auto a = copositivity_test(Mat::Identity(2, 2), P);
  CHECK(a.status == CopositivityResult::Status::Proven);
  CHECK(a.margin > 0);
  CHECK(a.margin <= 1.0 + 1e-12);

  const auto b = copositivity_test(mat(2, 2, {1, 0, 0, -1}), P);
  REQUIRE(b.status == CopositivityResult::Status::Disproven);
  CHECK(b.witness->isApprox(vec({0, 1})));

  const auto c = copositivity_test(mat(2, 2, {1, -1, -1, 1}), P);
  CHECK(c.status != CopositivityResult::Status::Proven);
  if (c.witness) CHECK(c.witness->dot(mat(2, 2, {1, -1, -1, 1}) * *c.witness) <= 0);

  // copositive but not positive semidefinite
  const auto d = copositivity_test(mat(2, 2, {1, 1, 1, -0.5}), ConvexPolyhedron::cone(mat(2, 2, {0, -1, -1, 1}), Mat(0, 2)));
  CHECK(d.status == CopositivityResult::Status::Proven);

  // lineality: P = R x R_+, Q must be positive on the line
  const ConvexPolyhedron H = ConvexPolyhedron::cone(mat(1, 2, {0, -1}), Mat(0, 2));
  CHECK(copositivity_test(mat(2, 2, {2, 1, 1, 1}), H).status == CopositivityResult::Status::Proven);
  const auto e = copositivity_test(mat(2, 2, {-1, 0, 0, 1}), H);
  REQUIRE(e.status == CopositivityResult::Status::Disproven);
  CHECK(std::abs(e.witness->x()) == doctest::Approx(1.0));
  // whole space
  CHECK(copositivity_test(mat(2, 2, {1, 2, 2, 1}), ConvexPolyhedron::whole(2)).status ==
        CopositivityResult::Status::Disproven);
}

TEST_CASE("copositivity margin and soundness against sampling") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> coef(-2, 2);
  int proven = 0, disproven = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + rep % 3;
    Mat Q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Q(i, j) = g(rng);
    Q = 0.5 * (Q + Q.transpose());
    Q.diagonal().array() += 0.8;
    Mat A(n + 1, n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = coef(rng);
    const ConvexPolyhedron P = ConvexPolyhedron::cone(A, Mat(0, n));
    const auto r = copositivity_test(Q, P);
    const auto gens = generators(P);
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 10000 && !gens.rays.empty(); ++s) {
      Vec u = Vec::Zero(n);
      for (const Vec& ray : gens.rays) u += std::abs(g(rng)) * std::pow(std::abs(g(rng)), 3) * ray;
      for (const Vec& l : gens.lines) u += g(rng) * l;
      if (u.norm() == 0) continue;
      u.normalize();
      worst = std::min(worst, u.dot(Q * u));
    }
    if (r.status == CopositivityResult::Status::Proven) {
      ++proven;
      CHECK(worst >= r.margin - 1e-12);
    }
    if (r.status == CopositivityResult::Status::Disproven) {
      ++disproven;
      CHECK(r.witness->dot(Q * *r.witness) <= 0);
      CHECK(cone_contains(P, *r.witness));
    }
  }
  CHECK(proven > 10);
  CHECK(disproven > 10);
}

TEST_CASE("sufficient condition examples") {
  const ProblemPoint a = make_problem(parse("x1^2 + x2^2"), identity_map(2), dcomp(), Vec::Zero(2));
  const CheckReport ra = sufficient_check(a);
  CHECK(ra.verdict == Verdict::Proven);
  CHECK(ra.margin == doctest::Approx(1.0));

  const PolyhedralSet half(ConvexPolyhedron(mat(1, 2, {-1, 0}), vec({0}), Mat(0, 2), Vec(0)));
  const ProblemPoint b = make_problem(parse("x1"), identity_map(2), half, Vec::Zero(2));
  CHECK(sufficient_check(b).verdict == Verdict::Unknown);

  const PolyhedralSet quad(ConvexPolyhedron(-Mat::Identity(2, 2), Vec::Zero(2), Mat(0, 2), Vec(0)));
  const ProblemPoint c = make_problem(parse("x1 + x2"), identity_map(2), quad, Vec::Zero(2));
  const CheckReport rc = sufficient_check(c);
  CHECK(rc.verdict == Verdict::Proven);
  CHECK(rc.parts.empty());

  // needs a nonzero multiplier: curvature of the constraint carries the certificate
  const ProblemPoint d = make_problem(parse("-x2 + x1^2 / 2"), {parse("x1"), parse("x2 - x1^2")}, dcomp(),
                                      Vec::Zero(2));
  const CheckReport rd = sufficient_check(d);
  CHECK(rd.verdict == Verdict::Unknown);
  const ProblemPoint e = make_problem(parse("x2 + x1^2"), {parse("x1"), parse("x1^2 - x2")}, dcomp(),
                                      Vec::Zero(2));
  CHECK(sufficient_check(e).verdict == Verdict::Proven);
}

TEST_CASE("sampling oracles") {
  const ProblemPoint a = make_problem(parse("x1^2 + x2^2"), identity_map(2), dcomp(), Vec::Zero(2));
  const SamplingResult ra = essential_min_oracle(a, 0.5, 0.1, 10000);
  CHECK(ra.holds);
  CHECK(ra.tested == 10000);
  const SamplingResult rs = essential_min_oracle_serial(a, 0.5, 0.1, 10000);
  CHECK(rs.holds);

  const ProblemPoint cubic = make_problem(parse("x1^3"), {}, whole(0), Vec::Zero(1));
  const SamplingResult rc = essential_min_oracle(cubic, 1e-3, 0.1, 1000);
  REQUIRE_FALSE(rc.holds);
  CHECK((*rc.fails_at)(0) < 0);
  const SamplingResult rc2 = essential_min_oracle_serial(cubic, 1e-3, 0.1, 1000);
  CHECK(rc2.index == rc.index);
  CHECK(rc2.fails_at->isApprox(*rc.fails_at));

  const ProblemPoint zero = make_problem(parse("0"), identity_map(2), dcomp(), Vec::Zero(2));
  CHECK_FALSE(quadratic_growth_oracle(zero, 1e-3, 0.1, 500).holds);
  const SamplingResult g = quadratic_growth_oracle(a, 0.5, 0.1, 2000);
  CHECK(g.holds);
  CHECK(g.tested > 1000);
  CHECK(quadratic_growth_oracle_serial(a, 0.5, 0.1, 2000).tested == g.tested);
}

TEST_CASE("halton points") {
  const Vec h1 = halton(1, 3, 0);
  const Vec h1b = halton(1, 3, 0);
  CHECK(h1 == h1b);
  CHECK((halton(2, 3, 0) - h1).norm() > 0);
  for (long k = 1; k < 200; ++k) {
    const Vec x = cube_to_ball(halton(k, 3, 5), vec({1, 2, 3}), 0.5);
    CHECK((x - vec({1, 2, 3})).norm() <= 0.5 + 1e-15);
  }
}

TEST_CASE("unconstrained problems") {
  const ProblemPoint a = make_problem(parse("x1^2 + x2^2"), {}, whole(0), Vec::Zero(2));
  CHECK(critical_cone(a).regions.size() == 1);
  CHECK(sufficient_check(a).verdict == Verdict::Proven);
  const ProblemPoint b = make_problem(parse("x1^2 - x2^2"), {}, whole(0), Vec::Zero(2));
  CHECK(necessary_check(b, vec({0, 1}), MultiplierMode::M).verdict == Verdict::Violated);
  CHECK(sufficient_check(b).verdict == Verdict::Unknown);
  const auto x = descent_witness(b, vec({0, 1}), 1e-2);
  REQUIRE(x);
  CHECK(b.objective.eval(*x) < 0);
}
