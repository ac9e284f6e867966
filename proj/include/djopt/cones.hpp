#pragma once

#include <cstdint>
#include <vector>

#include "djopt/polyhedra.hpp"

namespace djopt {

struct DirectionalContext {
  PolyhedralSet S;
  Vec z;
  Vec w;  // may be zero

  // Throws DimensionMismatch / PointNotInSet.
  void validate(const Tolerance& tol = default_tolerance()) const;
};

// Membership in a cone (or any set) after scaling v to unit max-norm.
bool cone_contains(const PolyhedralCone& K, const Vec& v, const Tolerance& tol = default_tolerance());
bool cone_contains(const ConvexPolyhedron& K, const Vec& v, const Tolerance& tol = default_tolerance());

bool is_tangent(const PolyhedralSet& S, const Vec& z, const Vec& w,
                const Tolerance& tol = default_tolerance());

// T_{T_S(z)}(w); empty marker if w is not tangent.
PolyhedralCone second_order_tangent_set(const DirectionalContext& ctx,
                                        const Tolerance& tol = default_tolerance());

ConvexPolyhedron regular_normal_cone(const PolyhedralSet& S, const Vec& z,
                                     const Tolerance& tol = default_tolerance());

// Union over cells of T_S(z) of the regular normal cone at the cell.
PolyhedralCone limiting_normal_cone(const PolyhedralSet& S, const Vec& z,
                                    const Tolerance& tol = default_tolerance());

PolyhedralCone directional_limiting_normal_cone(const DirectionalContext& ctx,
                                                const Tolerance& tol = default_tolerance());

// Single convex piece, or the empty marker when w is not tangent.
PolyhedralCone directional_proximal_normal_cone(const DirectionalContext& ctx,
                                                const Tolerance& tol = default_tolerance());

// Closed convex hull of the directional limiting normal cone (single piece or empty).
PolyhedralCone clarke_directional_normal_cone(const DirectionalContext& ctx,
                                              const Tolerance& tol = default_tolerance());

// Polar of the directional limiting normal cone (whole space if w is not tangent).
ConvexPolyhedron directional_regular_tangent_cone(const DirectionalContext& ctx,
                                                  const Tolerance& tol = default_tolerance());

// All generators of all pieces (rays and lines merged).
GeneratorRep merged_generators(const PolyhedralCone& K, const Tolerance& tol = default_tolerance());

// Orthonormal basis of the span of a cone union.
Mat cone_span(const PolyhedralCone& K, const Tolerance& tol = default_tolerance());

// Drops pieces contained in another piece; the union is unchanged.
PolyhedralCone prune_pieces(const PolyhedralCone& K, const Tolerance& tol = default_tolerance());

// Minkowski-sum membership: v in K1 + K2 for convex pieces, checked by LP per
// pair of pieces.
bool sum_contains(const PolyhedralCone& K1, const PolyhedralCone& K2, const Vec& v,
                  const Tolerance& tol = default_tolerance());

struct AgreementReport {
  std::size_t probes = 0;
  std::size_t disagreements = 0;
  std::vector<Vec> witnesses;  // first few disagreeing probes
  bool agree() const { return disagreements == 0; }
};

// Probe vectors for comparing two cones: generators, random nonnegative
// combinations within pieces, and Gaussian vectors.
std::vector<Vec> cone_probes(const PolyhedralCone& K1, const PolyhedralCone& K2, std::size_t count,
                             std::uint64_t seed, const Tolerance& tol = default_tolerance());

// Two-sided membership sampling (OpenMP parallel).
AgreementReport compare_cones(const PolyhedralCone& K1, const PolyhedralCone& K2,
                              const std::vector<Vec>& probes,
                              const Tolerance& tol = default_tolerance());
// Serial reference of compare_cones.
AgreementReport compare_cones_serial(const PolyhedralCone& K1, const PolyhedralCone& K2,
                                     const std::vector<Vec>& probes,
                                     const Tolerance& tol = default_tolerance());

}  // namespace djopt
