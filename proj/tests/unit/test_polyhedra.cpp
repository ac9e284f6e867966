#include <doctest.h>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "djopt/cones.hpp"
#include "djopt/error.hpp"
#include "djopt/polyhedra.hpp"

using namespace djopt;
using testing::mat;
using testing::vec;

TEST_CASE("polyhedra: contains") {
  const auto D = testing::dcomp();
  CHECK(contains(D, vec({1, 0})));
  CHECK(contains(D, vec({0, -3})));
  CHECK_FALSE(contains(D, vec({1, 1})));
  CHECK_THROWS_AS(contains(D, vec({1, 1, 1})), Error);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const Vec z = testing::random_int_vector(rng, 2, -2, 2);
    const bool direct = (z(0) >= 0 && z(1) == 0) || (z(0) == 0 && z(1) <= 0);
    CHECK(contains(D, z) == direct);
  }
}

TEST_CASE("polyhedra: tangent cones") {
  const auto D = testing::dcomp();
  const auto T0 = tangent_cone(D, vec({0, 0}));
  CHECK(T0.pieces.size() == 2);
  for (const Vec& w : {vec({1, 0}), vec({0, -1}), vec({1, 1}), vec({-1, 0}), vec({0, 1})})
    CHECK(cone_contains(T0, w) == contains(D, w));

  const auto T1 = tangent_cone(D, vec({1, 0}));
  CHECK(cone_contains(T1, vec({-1, 0})));
  CHECK(cone_contains(T1, vec({1, 0})));
  CHECK_FALSE(cone_contains(T1, vec({0, 1})));

  const auto H = testing::halfplane_a_le_0();
  const auto TH = tangent_cone(H, vec({0, 5}));
  CHECK(cone_contains(TH, vec({-1, 3})));
  CHECK_FALSE(cone_contains(TH, vec({1, 0})));

  CHECK_THROWS_AS(tangent_cone(D, vec({1, 1})), Error);
}

TEST_CASE("polyhedra: local exactness of the tangent cone") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec z = testing::random_int_vector(rng, 3, -1, 1);
    const auto S = testing::random_set(rng, 3, 3, z);
    const auto T = tangent_cone(S, z);
    const double r = 1e-3;
    for (int i = 0; i < 200; ++i) {
      const Vec d = testing::gaussian(rng, 3);
      const Vec y = z + r * d / linalg::inf_norm(d) * (0.1 + 0.9 * (i % 10) / 10.0);
      CHECK(contains(S, y) == cone_contains(T, Vec(y - z)));
    }
  }
}

TEST_CASE("polyhedra: distance") {
  const auto D = testing::dcomp();
  CHECK(distance_inf(D, vec({1, 1})).value == doctest::Approx(1));
  CHECK(distance_inf(D, vec({2, 0})).value == doctest::Approx(0));
  CHECK(distance_inf(testing::halfplane_a_le_0(), vec({3, 0})).value == doctest::Approx(3));
  ConvexPolyhedron empty(mat(2, 1, {1, -1}), vec({-1, -1}), Mat(0, 1), Vec(0));
  CHECK(distance_inf(PolyhedralSet(empty), vec({0})).empty());

  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Vec z = testing::random_int_vector(rng, 2, -2, 2) / 2.0;
    CHECK((distance_inf(D, z).value <= 1e-9) == contains(D, z));
  }
}

TEST_CASE("polyhedra: faces") {
  const ConvexPolyhedron orthant(-Mat::Identity(2, 2), Vec::Zero(2), Mat(0, 2), Vec(0));
  CHECK(faces(orthant).size() == 4);
  const ConvexPolyhedron seg(mat(2, 1, {1, -1}), vec({1, 0}), Mat(0, 1), Vec(0));
  CHECK(faces(seg).size() == 3);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 3; ++t) {
    const Vec lo = testing::random_int_vector(rng, 3, -3, 0);
    const Vec hi = lo + testing::random_int_vector(rng, 3, 1, 3);
    Mat A(6, 3);
    A << Mat::Identity(3, 3), -Mat::Identity(3, 3);
    Vec b(6);
    b << hi, -lo;
    const ConvexPolyhedron box(A, b, Mat(0, 3), Vec(0));
    const auto fs = faces(box);
    CHECK(fs.size() == 27);
    for (const Face& f : fs) {
      CHECK(contains(box, f.rep_point));
      CHECK(active_rows(box, f.rep_point) == f.active);
    }
  }
  // Implicit equalities are part of every face.
  const ConvexPolyhedron flat(mat(3, 2, {1, 0, -1, 0, 0, 1}), vec({0, 0, 1}), Mat(0, 2), Vec(0));
  CHECK(faces(flat).size() == 2);
}

TEST_CASE("polyhedra: polar") {
  const auto D = testing::dcomp();
  const ConvexPolyhedron P = polar(D);
  for (const Vec& v : {vec({-1, 1}), vec({0, 1}), vec({-1, 0}), vec({0, 0})}) CHECK(cone_contains(P, v));
  for (const Vec& v : {vec({1, 0}), vec({0, -1}), vec({1, 1})}) CHECK_FALSE(cone_contains(P, v));

  const ConvexPolyhedron Pall = polar(PolyhedralCone(ConvexPolyhedron::whole(2)));
  CHECK_FALSE(cone_contains(Pall, vec({1, 0})));
  CHECK(cone_contains(Pall, vec({0, 0})));

  // Bipolar contains the cone; equality for convex pieces.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto K = testing::random_set(rng, 3, 3, Vec::Zero(3), true);
    const ConvexPolyhedron PP = polar(PolyhedralCone(polar(K)));
    for (int i = 0; i < 100; ++i) {
      const Vec v = testing::gaussian(rng, 3);
      if (cone_contains(K, v)) CHECK(cone_contains(PP, v));
      if (K.pieces.size() == 1) CHECK(cone_contains(K, v) == cone_contains(PP, v));
    }
  }
}

TEST_CASE("polyhedra: polar is antitone") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat A = testing::random_int_matrix(rng, 2, 3, -2, 2);
    const Mat extra = testing::random_int_matrix(rng, 1, 3, -2, 2);
    const ConvexPolyhedron K2 = ConvexPolyhedron::cone(A, Mat(0, 3));
    const ConvexPolyhedron K1 = ConvexPolyhedron::cone(linalg::vstack(A, extra), Mat(0, 3));
    const ConvexPolyhedron P1 = polar(PolyhedralCone(K1)), P2 = polar(PolyhedralCone(K2));
    for (int i = 0; i < 100; ++i) {
      const Vec v = testing::gaussian(rng, 3);
      if (cone_contains(P2, v)) CHECK(cone_contains(P1, v));
    }
  }
}

TEST_CASE("polyhedra: lineality") {
  const ConvexPolyhedron line = ConvexPolyhedron::cone(Mat(0, 2), mat(1, 2, {0, 1}));
  const Mat L = lineality_space(line);
  REQUIRE(L.cols() == 1);
  CHECK(std::abs(L(1, 0)) < 1e-12);
  const ConvexPolyhedron orthant = ConvexPolyhedron::cone(-Mat::Identity(2, 2), Mat(0, 2));
  CHECK(lineality_space(orthant).cols() == 0);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexPolyhedron K = ConvexPolyhedron::cone(testing::random_int_matrix(rng, 2, 4, -2, 2), Mat(0, 4));
    const Mat Lk = lineality_space(K);
    for (int i = 0; i < 50; ++i) {
      const Vec v = testing::gaussian(rng, 4);
      if (!cone_contains(K, v)) continue;
      const Vec shift = Lk * testing::gaussian(rng, Lk.cols());
      CHECK(cone_contains(K, Vec(v + shift)));
    }
  }
}

TEST_CASE("polyhedra: cells cover the union") {
  // K = {b <= 0} ∪ {a >= 0, b >= 0}: the edge b = 0 splits at a = 0.
  ConvexPolyhedron lower(mat(1, 2, {0, 1}), vec({0}), Mat(0, 2), Vec(0));
  ConvexPolyhedron quad(mat(2, 2, {-1, 0, 0, -1}), vec({0, 0}), Mat(0, 2), Vec(0));
  const PolyhedralSet K(2, {lower, quad});
  const auto cs = cells(K);
  bool found_left_edge = false;
  for (const Cell& c : cs) {
    CHECK(contains(K, c.rep_point));
    if (std::abs(c.rep_point(1)) < 1e-12 && c.rep_point(0) < -1e-6) found_left_edge = true;
  }
  CHECK(found_left_edge);
}
