#include <doctest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "djopt/error.hpp"
#include "djopt/oracles.hpp"
#include "djopt/supports.hpp"

using namespace djopt;
using namespace djopt::testing;

TEST_CASE("extended reals") {
  const ExtReal a(2.0), p = ExtReal::plus_inf(), m = ExtReal::minus_inf();
  CHECK((a + p).is_plus_inf());
  CHECK((m - a).is_minus_inf());
  CHECK((-p).is_minus_inf());
  CHECK(m < a);
  CHECK(a < p);
  CHECK(min(a, m).is_minus_inf());
  CHECK(max(a, p).is_plus_inf());
  CHECK(ExtReal(1.0 / 0.0).is_plus_inf());
  CHECK_THROWS_AS(p + m, Error);
  CHECK_THROWS_AS(p - p, Error);
  CHECK_THROWS_AS(p.value(), Error);
  CHECK(ExtReal::le_tol(ExtReal(1.0 + 1e-9), ExtReal(1.0), 1e-8));
  CHECK(p.str() == "+inf");
}

TEST_CASE("support function examples") {
  CHECK(support_function(PolyhedralSet::empty(2), vec({1, 2})).value.is_minus_inf());
  // The piece {a = 0, b <= 0} is unbounded in direction (-1,-1).
  CHECK(support_function(dcomp(), vec({-1, -1})).value.is_plus_inf());
  const auto r = support_function(dcomp(), vec({-1, 1}));
  REQUIRE(r.value.is_finite());
  CHECK(r.value.value() == doctest::Approx(0.0));
  REQUIRE(r.attaining_point);
  CHECK(contains(dcomp(), *r.attaining_point));
  CHECK(support_function(dcomp(), vec({1, 0})).value.is_plus_inf());
}

TEST_CASE("support of a cone is finite exactly on its polar") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    const PolyhedralSet K = random_set(rng, 3, 3, Vec::Zero(3), true);
    const ConvexPolyhedron Kp = polar(K);
    for (int j = 0; j < 30; ++j) {
      Vec v(3);
      for (int i = 0; i < 3; ++i) v(i) = g(rng);
      if (j % 3 == 0) {
        const GeneratorRep gr = generators(Kp);
        if (!gr.rays.empty()) v = gr.rays[static_cast<std::size_t>(j) % gr.rays.size()];
      }
      const ExtReal s = support_function(K, v).value;
      CHECK(s.is_finite() == cone_contains(Kp, v));
      if (s.is_finite()) CHECK(std::abs(s.value()) < 1e-8);
    }
  }
}

TEST_CASE("lower generalized support examples") {
  CHECK(lower_generalized_support(PolyhedralSet::empty(2), vec({1, 0})).is_minus_inf());
  const PolyhedralSet S = shifted(dcomp(), vec({1, 1}));
  const ExtReal h = lower_generalized_support(S, vec({0, 1}));
  REQUIRE(h.is_finite());
  CHECK(h.value() == doctest::Approx(1.0));
  CHECK(lower_support_oracle(S, vec({0, 1})).contains(h));
  // (1,0) is normal only along the ray {a = 1, b < 1}: no admissible cell.
  CHECK(lower_generalized_support(S, vec({1, 1})).is_plus_inf());
}

TEST_CASE("translated cones") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coord(-3, 3);
  std::normal_distribution<double> g;
  int finite = 0, thin = 0;
  for (int rep = 0; rep < 25; ++rep) {
    const PolyhedralSet K = random_set(rng, 2 + rep % 2, 3, Vec::Zero(2 + rep % 2), true);
    const Eigen::Index n = K.dim;
    Vec z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = coord(rng);
    const PolyhedralSet S = shifted(K, z);
    const PolyhedralCone N = limiting_normal_cone(K, Vec::Zero(n));
    const ConvexPolyhedron Nr = regular_normal_cone(K, Vec::Zero(n));
    for (int j = 0; j < 8; ++j) {
      Vec v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
      if (j % 2 == 0 && !N.pieces.empty()) {
        const GeneratorRep gr = generators(N.pieces[static_cast<std::size_t>(j / 2) % N.pieces.size()]);
        Vec acc = Vec::Zero(n);
        for (const Vec& r : gr.rays) acc += std::abs(g(rng)) * r;
        for (const Vec& l : gr.lines) acc += g(rng) * l;
        v = acc;
      }
      const ExtReal h = lower_generalized_support(S, v);
      if (cone_contains(N, v)) {
        REQUIRE(h.is_finite());
        CHECK(h.value() == doctest::Approx(v.dot(z)).epsilon(1e-7));
        ++finite;
        thin += !cone_contains(Nr, v);
      } else {
        CHECK(h.is_plus_inf());
      }
    }
  }
  CHECK(finite > 20);
  CHECK(thin > 5);
}

TEST_CASE("Dcomp: limiting but not regular normals") {
  const ExtReal h = lower_generalized_support(shifted(dcomp(), vec({2, -1})), vec({0, -1}));
  REQUIRE(h.is_finite());
  CHECK(h.value() == doctest::Approx(1.0));
  CHECK(lower_generalized_support(dcomp(), vec({1, -1})).is_plus_inf());
}

TEST_CASE("convex sets: lower support equals support") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  int checked = 0;
  for (int rep = 0; rep < 30; ++rep) {
    PolyhedralSet S = random_set(rng, 3, 1, vec({0.5, -1, 1}));
    S.pieces.resize(1);
    for (int j = 0; j < 10; ++j) {
      Vec v(3);
      for (int i = 0; i < 3; ++i) v(i) = g(rng);
      const auto s = support_function(S, v);
      if (!s.value.is_finite()) {
        // Recenter onto the domain of sigma: the optimal dual of a bounded direction.
        continue;
      }
      const ExtReal h = lower_generalized_support(S, v);
      REQUIRE(h.is_finite());
      CHECK(h.value() == doctest::Approx(s.value.value()).epsilon(1e-7));
      ++checked;
    }
    // Directions from the normal cone at a vertex are always in dom sigma.
    const auto pt = support_function(S, Vec::Ones(3));
    if (pt.attaining_point) {
      const ConvexPolyhedron N = regular_normal_cone(S, *pt.attaining_point);
      const GeneratorRep gr = generators(N);
      for (const Vec& r : gr.rays) {
        const auto s = support_function(S, r);
        REQUIRE(s.value.is_finite());
        CHECK(lower_generalized_support(S, r).value() == doctest::Approx(s.value.value()).epsilon(1e-7));
        ++checked;
      }
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("lower support never exceeds support") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    const PolyhedralSet S = random_set(rng, 2, 3, vec({1, -1}));
    for (int j = 0; j < 8; ++j) {
      const Vec v = vec({g(rng), g(rng)});
      const ExtReal s = support_function(S, v).value;
      const ExtReal h = lower_generalized_support(S, v);
      if (s.is_finite() && h.is_finite()) CHECK(h.value() <= s.value() + 1e-7);
      if (s.is_finite()) CHECK(!h.is_minus_inf());
    }
  }
}

TEST_CASE("lower support matches the sampling oracle") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  SamplerConfig cfg;
  cfg.probe_count = 300;
  int finite = 0;
  for (int rep = 0; rep < 12; ++rep) {
    const PolyhedralSet S = random_set(rng, 2, 3, vec({1, 0}));
    for (int j = 0; j < 3; ++j) {
      Vec v = vec({g(rng), g(rng)});
      if (j < 2) {
        const auto pts = cells(S);
        for (std::size_t off = 0; off < pts.size(); ++off) {
          const auto& c = pts[(static_cast<std::size_t>(rep + 5 * j) + off) % pts.size()];
          const GeneratorRep gr = generators(regular_normal_cone(S, c.rep_point));
          if (gr.rays.empty() && gr.lines.empty()) continue;
          Vec acc = Vec::Zero(2);
          for (const Vec& r : gr.rays) acc += std::abs(g(rng)) * r;
          for (const Vec& l : gr.lines) acc += g(rng) * l;
          if (!acc.isZero()) v = acc;
          break;
        }
      }
      const ExtReal h = lower_generalized_support(S, v);
      const Band b = lower_support_oracle(S, v, cfg);
      INFO("rep " << rep << " j " << j << " exact " << h.str() << " band [" << b.lo.str() << ", " << b.hi.str()
                  << "]");
      CHECK(b.contains(h));
      finite += h.is_finite();
    }
  }
  CHECK(finite >= 8);
}

TEST_CASE("second subderivative of the indicator") {
  const PolyhedralSet D = dcomp();
  const Vec z = Vec::Zero(2);
  CHECK(second_subderivative_indicator({D, z, vec({1, 0})}, vec({0, 5})) == ExtReal(0.0));
  CHECK(second_subderivative_indicator({D, z, vec({1, 0})}, vec({1, 0})).is_minus_inf());
  CHECK(second_subderivative_indicator({D, z, vec({1, 1})}, vec({0, 5})).is_plus_inf());
  CHECK(second_subderivative_indicator({D, z, vec({1, 0})}, vec({-1, 0})).is_plus_inf());
  CHECK_THROWS_AS(second_subderivative_indicator({D, vec({1, 1}), vec({1, 0})}, vec({0, 1})), Error);

  const SetOracle O = polyhedral_oracle(D);
  for (const auto& [w, zs] : std::vector<std::pair<Vec, Vec>>{{vec({1, 0}), vec({0, 5})},
                                                              {vec({1, 0}), vec({1, 0})},
                                                              {vec({1, 0}), vec({-1, 0})},
                                                              {vec({1, 1}), vec({0, 5})},
                                                              {vec({0, 0}), vec({-1, 1})},
                                                              {vec({0, 0}), vec({1, 1})}}) {
    const ExtReal d = second_subderivative_indicator({D, z, w}, zs);
    CHECK(d2_indicator_oracle(O, z, zs, w).contains(d));
  }
}

TEST_CASE("curvature chain on random fixtures") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  int zero_cases = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const Vec z = vec({0, 1, -1});
    const PolyhedralSet S = random_set(rng, 3, 3, z);
    const PolyhedralCone T = tangent_cone(S, z);
    const GeneratorRep gr = generators(T.pieces.at(0));
    Vec w = Vec::Zero(3);
    for (const Vec& r : gr.rays) w += std::abs(g(rng)) * r;
    for (const Vec& l : gr.lines) w += g(rng) * l;
    const PolyhedralCone T2 = second_order_tangent_set({S, z, w});
    const ConvexPolyhedron N = regular_normal_cone(T, w);
    for (int j = 0; j < 5; ++j) {
      Vec zs = Vec(3);
      for (int i = 0; i < 3; ++i) zs(i) = g(rng);
      if (j < 3) {
        const GeneratorRep ng = generators(N);
        zs.setZero();
        for (const Vec& r : ng.rays) zs += std::abs(g(rng)) * r;
        for (const Vec& l : ng.lines) zs += g(rng) * l;
      }
      if (zs.dot(w) < -1e-9) continue;
      const ExtReal d = second_subderivative_indicator({S, z, w}, zs);
      const ExtReal s = support_function(T2, zs).value;
      const ExtReal h = lower_generalized_support(T2, zs);
      CHECK(ExtReal::le_tol(d, -s, 1e-7));
      CHECK(ExtReal::le_tol(-s, -h, 1e-7));
      zero_cases += d.is_finite();
    }
  }
  CHECK(zero_cases > 10);
}
