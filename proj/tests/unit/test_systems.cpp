#include <doctest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "djopt/error.hpp"
#include "djopt/oracles.hpp"
#include "djopt/systems.hpp"

using namespace djopt;
using namespace djopt::testing;

namespace {

std::vector<Expr> parse_all(std::initializer_list<const char*> xs) {
  std::vector<Expr> out;
  for (const char* s : xs) out.push_back(parse(s));
  return out;
}

// {a = 0} ∪ {b = 0}
PolyhedralSet switching() {
  ConvexPolyhedron p1(Mat(0, 2), Vec(0), mat(1, 2, {1, 0}), vec({0}));
  ConvexPolyhedron p2(Mat(0, 2), Vec(0), mat(1, 2, {0, 1}), vec({0}));
  return PolyhedralSet(2, {p1, p2});
}

SystemPoint parabola() { return make_system(parse_all({"x1", "x2 - x1^2"}), dcomp(), Vec::Zero(2)); }

SetOracle expr_oracle(const std::vector<Expr>& G, const PolyhedralSet& D, Eigen::Index n) {
  return gamma_oracle([G](const Vec& x) { return evaluate(G, x); },
                      [G](const Vec& x) { return jacobian_at(G, x); }, D, n);
}

std::string random_quadratic(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coef(-2, 2);
  std::string s = "0";
  for (int i = 1; i <= n; ++i) {
    const int a = coef(rng);
    if (a) s += " + " + std::to_string(a) + "*x" + std::to_string(i);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const int a = coef(rng);
      if (a && coef(rng) >= 0) s += " + " + std::to_string(a) + "*x" + std::to_string(i) + "*x" + std::to_string(j);
    }
  return s;
}

std::vector<Vec> direction_candidates(const SystemPoint& sp) {
  std::vector<Vec> out{Vec::Zero(sp.n())};
  for (const auto& P : linearization_cone(sp).pieces) {
    const GeneratorRep g = generators(P);
    for (const Vec& r : g.rays) out.push_back(r);
    for (const Vec& l : g.lines) {
      out.push_back(l);
      out.push_back(-l);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("linearization cone examples") {
  const SystemPoint id = identity_system(dcomp(), Vec::Zero(2));
  const auto probes = cone_probes(linearization_cone(id), dcomp(), 300, 1);
  CHECK(compare_cones(linearization_cone(id), dcomp(), probes).agree());

  const SystemPoint sp = make_system(parse_all({"x1 - x2^2", "x2"}), dcomp(), Vec::Zero(2));
  const PolyhedralCone L = linearization_cone(sp);
  CHECK(compare_cones(L, dcomp(), cone_probes(L, dcomp(), 300, 2)).agree());
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(make_system(parse_all({"x1 + 1", "x2 + 1"}), dcomp(), Vec::Zero(2)), Error);
  CHECK_THROWS_AS(make_system(parse_all({"x3", "x2"}), dcomp(), Vec::Zero(2)), Error);
  CHECK_THROWS_AS(DirectionalSystem::make(parabola(), vec({1, 1})), Error);
}

TEST_CASE("FOSCMS and nondegeneracy on a duplicated component") {
  const SystemPoint sp = make_system(parse_all({"x1", "x1"}), dcomp(), Vec::Zero(1));
  const auto ds = DirectionalSystem::make(sp, Vec::Zero(1));
  const CheckResult f = foscms_check(ds);
  CHECK_FALSE(f.holds);
  REQUIRE(f.certificate);
  const Vec y = linalg::normalized_inf(*f.certificate);
  CHECK(std::abs(y(0) + y(1)) < 1e-12);
  CHECK(y(0) < 0);
  CHECK_FALSE(nondegeneracy_check(ds).holds);

  const auto id = DirectionalSystem::make(identity_system(dcomp(), Vec::Zero(2)), Vec::Zero(2));
  CHECK(foscms_check(id).holds);
  CHECK(nondegeneracy_check(id).holds);
  CHECK(generalized_nondegeneracy_check(id).holds);

  // interior point: span of normals is {0}
  const auto in = DirectionalSystem::make(identity_system(halfplane_a_le_0(), vec({-1, 0})), vec({1, 1}));
  CHECK(nondegeneracy_check(in).holds);
}

TEST_CASE("generalized nondegeneracy detects curvature along the kernel") {
  // kernel of grad G^T is span{(1,-1)}, c = (2, 0)
  const SystemPoint sp = make_system(parse_all({"x1 + x2^2", "x1"}), switching(), Vec::Zero(2));
  const auto ds = DirectionalSystem::make(sp, vec({0, 1}));
  CHECK_FALSE(nondegeneracy_check(ds).holds);
  const CheckResult g = generalized_nondegeneracy_check(ds);
  CHECK_FALSE(g.holds);
  REQUIRE(g.certificate);
  CHECK(std::abs(g.certificate->dot(ds.c)) > 1e-6);
  CHECK_THROWS_AS(lower_support_T2_gamma(ds, vec({0, 0})), Error);

  // affine G
  const SystemPoint aff = make_system(parse_all({"x1", "x1"}), dcomp(), Vec::Zero(1));
  CHECK(generalized_nondegeneracy_check(DirectionalSystem::make(aff, vec({0}))).holds);
}

TEST_CASE("parabola: second-order tangent set, support and second subderivative") {
  const auto ds = DirectionalSystem::make(parabola(), vec({1, 0}));
  CHECK(ds.c.isApprox(vec({0, -2})));
  const T2Gamma t2 = second_order_tangent_gamma(ds);
  CHECK_FALSE(t2.conditional);
  CHECK(contains(t2.set, vec({0, 2})));
  CHECK(contains(t2.set, vec({-7, 2})));
  CHECK_FALSE(contains(t2.set, vec({0, 1.9})));

  const SupportT2Result s = support_T2_gamma(ds, vec({0, 1}));
  REQUIRE(s.support.value.is_finite());
  CHECK(s.support.value.value() == doctest::Approx(2.0));
  REQUIRE(s.multiplier);
  CHECK(s.multiplier_in_lambda);
  CHECK(-s.multiplier->dot(ds.c) == doctest::Approx(2.0));

  const SecondSubderivative d2 = second_subderivative_gamma(ds, vec({0, 1}));
  CHECK(d2.value.value() == doctest::Approx(-2.0));
  CHECK(d2.in_domain);

  CHECK(support_T2_gamma(ds, Vec::Zero(2)).support.value.value() == doctest::Approx(0.0));
  CHECK(support_T2_gamma(ds, vec({1, 0})).support.value.is_plus_inf());
  CHECK(second_subderivative_gamma(ds, vec({1, 0})).value.is_minus_inf());
  CHECK(second_subderivative_gamma(ds, vec({-1, 0})).value.is_plus_inf());
  CHECK(second_subderivative_gamma(ds, vec({0, -1})).value.value() == doctest::Approx(2.0));

  const LowerSupportT2 lo = lower_support_T2_gamma_detail(ds, vec({0, 1}));
  CHECK(lo.p0(1) == doctest::Approx(2.0));
  CHECK(lo.value.value() == doctest::Approx(2.0));
  CHECK(lower_support_T2_gamma(ds, vec({1, 1})).is_plus_inf());
  // against the explicitly built set
  CHECK(lower_generalized_support(t2.set, vec({0, 1})).value() == doctest::Approx(2.0));
}

TEST_CASE("parabola: d2 matches the grid oracle on Gamma") {
  const auto G = parse_all({"x1", "x2 - x1^2"});
  const SetOracle O = expr_oracle(G, dcomp(), 2);
  const Band b = d2_indicator_oracle(O, Vec::Zero(2), vec({0, 1}), vec({1, 0}));
  CHECK(b.contains(ExtReal(-2.0), 1e-3));
}

TEST_CASE("second-order tangent set matches curve sampling on Gamma") {
  std::mt19937_64 rng(7);
  int fixtures = 0, positives = 0, negatives = 0;
  for (int rep = 0; rep < 200 && fixtures < 20; ++rep) {
    const PolyhedralSet D = rep % 2 ? dcomp() : switching();
    const auto G = std::vector<Expr>{parse(random_quadratic(rng, 2)), parse(random_quadratic(rng, 2))};
    const SystemPoint sp = make_system(G, D, Vec::Zero(2));
    if (!foscms_check(DirectionalSystem::make(sp, Vec::Zero(2))).holds) continue;
    const SetOracle O = expr_oracle(G, D, 2);
    for (const Vec& u : direction_candidates(sp)) {
      if (u.isZero()) continue;
      const auto ds = DirectionalSystem::make(sp, u);
      if (!foscms_check(ds).holds) continue;
      const T2Gamma t2 = second_order_tangent_gamma(ds);
      std::normal_distribution<double> g;
      for (int k = 0; k < 6; ++k) {
        Vec s(2);
        s << g(rng), g(rng);
        // half the probes projected onto a piece
        if (k % 2 == 0 && !t2.set.pieces.empty()) {
          const auto r = distance_inf(t2.set, s);
          if (!r.empty()) s = r.nearest;
        }
        const bool exact = contains(t2.set, s, Tolerance{1e-7, 1e-10, 1e-8});
        CHECK_MESSAGE(second_order_tangent_oracle(O, Vec::Zero(2), u, s) == exact, "u=", u.transpose(),
                      " s=", s.transpose());
        (exact ? positives : negatives)++;
      }
      ++fixtures;
      break;
    }
  }
  CHECK(fixtures >= 20);
  CHECK(positives > 20);
  CHECK(negatives > 20);
}

TEST_CASE("multiplier sets") {
  const auto id = DirectionalSystem::make(identity_system(dcomp(), Vec::Zero(2)), Vec::Zero(2));
  const MultiplierSet S = multiplier_set(id, vec({-1, 1}), MultiplierKind::S);
  CHECK(S.singleton());
  CHECK(S.contains(vec({-1, 1})));
  CHECK_FALSE(S.contains(vec({-1, 1.5})));
  CHECK(multiplier_set(id, vec({1, 1}), MultiplierKind::S).empty());
  CHECK_FALSE(multiplier_set(id, vec({1, 0}), MultiplierKind::M).empty());
  CHECK(multiplier_set(id, vec({1, 0}), MultiplierKind::S).empty());

  // duplicated component: Lambda is a segment of the anti-diagonal
  const SystemPoint sp = make_system(parse_all({"x1", "x1"}), dcomp(), Vec::Zero(1));
  const auto ds = DirectionalSystem::make(sp, Vec::Zero(1));
  const MultiplierSet M = multiplier_set(ds, vec({1}), MultiplierKind::M);
  CHECK_FALSE(M.empty());
  CHECK_FALSE(M.singleton());
  const auto ext = M.extents();
  REQUIRE(ext.size() == 2);
  CHECK(ext[0].lo.is_minus_inf());
  CHECK(ext[0].hi.value() == doctest::Approx(1.0));
}

TEST_CASE("multiplier bounds") {
  const auto ds = DirectionalSystem::make(parabola(), vec({1, 0}));
  const MultiplierBounds b = multiplier_bounds(ds, vec({0, 1}));
  CHECK_FALSE(b.clipped);
  CHECK(b.lower.value() == doctest::Approx(-2.0));
  CHECK(b.upper.value() == doctest::Approx(-2.0));
  REQUIRE(b.attaining);
  CHECK_THROWS_AS(multiplier_bounds(ds, vec({0, 1}), std::nullopt, true), Error);
  const MultiplierBounds c = multiplier_bounds(ds, vec({0, 1}), 1.0, true);
  CHECK(c.clipped);
  CHECK(c.lower.value() == doctest::Approx(-2.0));

  // affine G: bounds are 0
  const auto aff = DirectionalSystem::make(identity_system(dcomp(), Vec::Zero(2)), vec({1, 0}));
  const MultiplierBounds z = multiplier_bounds(aff, vec({0, 1}));
  CHECK(z.lower.value() == doctest::Approx(0.0));
  CHECK(z.upper.value() == doctest::Approx(0.0));
  // empty Lambda
  const MultiplierBounds e = multiplier_bounds(aff, vec({1, 0}));
  CHECK(e.lower.is_plus_inf());
  CHECK(e.upper.is_minus_inf());
}

TEST_CASE("identity reduction") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const Vec z0 = vec({0, 1, -1});
    const PolyhedralSet S = random_set(rng, 3, 3, z0);
    const SystemPoint sp = identity_system(S, z0);
    const PolyhedralCone T = tangent_cone(S, z0);
    CHECK(compare_cones(linearization_cone(sp), T, cone_probes(linearization_cone(sp), T, 200, rep)).agree());
    for (const auto& P : T.pieces) {
      for (const Vec& w : generators(P).rays) {
        const auto ds = DirectionalSystem::make(sp, w);
        const DirectionalContext ctx{S, z0, w};
        const PolyhedralCone T2 = second_order_tangent_set(ctx);
        const PolyhedralSet mine = second_order_tangent_gamma(ds).set;
        CHECK(compare_cones(mine, T2, cone_probes(mine, T2, 100, rep)).agree());
        const NormalEqualities ne = directional_normal_equalities(ds);
        CHECK(ne.certified);
        const PolyhedralCone Nd = directional_limiting_normal_cone(ctx);
        CHECK(compare_cones(ne.image, Nd, cone_probes(ne.image, Nd, 100, rep)).agree());
        for (const Vec& y : merged_generators(Nd).rays) {
          const ExtReal a = second_subderivative_gamma(ds, y).value;
          const ExtReal b = second_subderivative_indicator(ctx, y);
          CHECK(a == b);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("normal equalities on a nondegenerate nonlinear system") {
  const SystemPoint sp = make_system(parse_all({"x1 + x2^2", "x2 - x1*x2"}), dcomp(), Vec::Zero(2));
  for (const Vec& u : {vec({0, 0}), vec({1, 0}), vec({0, -1})}) {
    const auto ds = DirectionalSystem::make(sp, u);
    const NormalEqualities ne = directional_normal_equalities(ds);
    CHECK(ne.certified);
    const PolyhedralCone ref = limiting_normal_cone(linearization_cone(sp), u);
    CHECK(compare_cones(ne.image, ref, cone_probes(ne.image, ref, 300, 5)).agree());
  }
  const SystemPoint dg = make_system(parse_all({"x1", "x1"}), dcomp(), Vec::Zero(1));
  CHECK_FALSE(directional_normal_equalities(DirectionalSystem::make(dg, Vec::Zero(1))).certified);
}

TEST_CASE("sandwich and attaining multipliers on random quadratic systems") {
  std::mt19937_64 rng(23);
  int finite = 0, nondeg = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + rep % 2;
    const PolyhedralSet D = rep % 3 ? dcomp() : switching();
    const auto G = std::vector<Expr>{parse(random_quadratic(rng, n)), parse(random_quadratic(rng, n))};
    const SystemPoint sp = make_system(G, D, Vec::Zero(n));
    for (const Vec& u : direction_candidates(sp)) {
      INFO("G=", G[0].str(), ", ", G[1].str(), " u=", u.transpose());
      const auto ds = DirectionalSystem::make(sp, u);
      if (!foscms_check(ds).holds) continue;
      for (const Vec& y : merged_generators(ds.N).rays) {
        const Vec xs = ds.J().transpose() * y;
        const SecondSubderivative d2 = second_subderivative_gamma(ds, xs);
        const MultiplierBounds b = multiplier_bounds(ds, xs);
        if (!d2.value.is_finite()) continue;
        ++finite;
        CHECK(ExtReal::le_tol(b.lower, d2.value, 1e-6));
        CHECK(ExtReal::le_tol(d2.value, b.upper, 1e-6));
        REQUIRE(d2.multiplier);
        CHECK(std::abs(d2.multiplier->dot(ds.c) - d2.value.value()) < 1e-6);
        if (generalized_nondegeneracy_check(ds).holds) {
          ++nondeg;
          const ExtReal lo = lower_support_T2_gamma(ds, xs);
          REQUIRE(lo.is_finite());
          CHECK(std::abs(lo.value() + d2.value.value()) < 1e-6);
          CHECK(std::abs(b.upper.value() - b.lower.value()) < 1e-6);
        }
      }
    }
  }
  CHECK(finite >= 30);
  CHECK(nondeg >= 10);
}

TEST_CASE("kappa oracle") {
  const SystemPoint hs = identity_system(halfplane_a_le_0(), Vec::Zero(2));
  CHECK(kappa_oracle(DirectionalSystem::make(hs, Vec::Zero(2))).kappa == doctest::Approx(1.0));
  const SystemPoint two = make_system(parse_all({"2*x1", "2*x2"}), halfplane_a_le_0(), Vec::Zero(2));
  CHECK(kappa_oracle(DirectionalSystem::make(two, Vec::Zero(2))).kappa == doctest::Approx(0.5));
}

TEST_CASE("kappa oracle bounds the preimage distance") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  int systems = 0;
  for (int rep = 0; rep < 40 && systems < 8; ++rep) {
    const int n = 2 + rep % 2;
    const PolyhedralSet D = rep % 2 ? dcomp() : switching();
    const auto G = std::vector<Expr>{parse(random_quadratic(rng, n)), parse(random_quadratic(rng, n))};
    const SystemPoint sp = make_system(G, D, Vec::Zero(n));
    const auto cands = direction_candidates(sp);
    const auto ds = DirectionalSystem::make(sp, cands[static_cast<std::size_t>(rep) % cands.size()]);
    KappaEstimate k;
    try {
      k = kappa_oracle(ds);
    } catch (const Error&) {
      continue;
    }
    ++systems;
    for (int s = 0; s < 200; ++s) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p(i) = 3 * g(rng);
      const double lhs = preimage_distance(ds, p), rhs = phi_residual(ds, p);
      CHECK(lhs <= k.kappa * rhs + 1e-7 * (1 + lhs));
    }
  }
  CHECK(systems >= 8);
}
