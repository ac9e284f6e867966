#include "djopt/cones.hpp"

#include <cmath>
#include <random>

#include "djopt/error.hpp"
#include "djopt/lp.hpp"

namespace djopt {

void DirectionalContext::validate(const Tolerance& tol) const {
  S.validate();
  require_dims(z.size() == S.dim && w.size() == S.dim, "directional context dimensions");
  if (!contains(S, z, tol)) fail(ErrorCode::PointNotInSet, "directional context: z not in S");
}

bool cone_contains(const ConvexPolyhedron& K, const Vec& v, const Tolerance& tol) {
  // below eps_zero the direction is rounding noise: treat it as the apex
  const double s = linalg::inf_norm(v);
  return contains(K, s > tol.eps_zero ? Vec(v / s) : Vec(Vec::Zero(v.size())), tol);
}

bool cone_contains(const PolyhedralCone& K, const Vec& v, const Tolerance& tol) {
  // below eps_zero the direction is rounding noise: treat it as the apex
  const double s = linalg::inf_norm(v);
  return contains(K, s > tol.eps_zero ? Vec(v / s) : Vec(Vec::Zero(v.size())), tol);
}

bool is_tangent(const PolyhedralSet& S, const Vec& z, const Vec& w, const Tolerance& tol) {
  return cone_contains(tangent_cone(S, z, tol), w, tol);
}

PolyhedralCone second_order_tangent_set(const DirectionalContext& ctx, const Tolerance& tol) {
  ctx.validate(tol);
  const PolyhedralCone T = tangent_cone(ctx.S, ctx.z, tol);
  if (!cone_contains(T, ctx.w, tol)) return PolyhedralCone::empty(ctx.S.dim);
  return tangent_cone(T, ctx.w, tol);
}

ConvexPolyhedron regular_normal_cone(const PolyhedralSet& S, const Vec& z, const Tolerance& tol) {
  return polar(tangent_cone(S, z, tol), tol);
}

GeneratorRep merged_generators(const PolyhedralCone& K, const Tolerance& tol) {
  GeneratorRep g;
  g.dim = K.dim;
  for (const auto& P : K.pieces) {
    const GeneratorRep gp = generators(P, tol);
    g.rays.insert(g.rays.end(), gp.rays.begin(), gp.rays.end());
    g.lines.insert(g.lines.end(), gp.lines.begin(), gp.lines.end());
  }
  return g;
}

Mat cone_span(const PolyhedralCone& K, const Tolerance& tol) {
  const GeneratorRep g = merged_generators(K, tol);
  std::vector<Vec> all = g.rays;
  all.insert(all.end(), g.lines.begin(), g.lines.end());
  if (all.empty()) return Mat(K.dim, 0);
  return linalg::column_span(linalg::cols_to_matrix(all, K.dim), tol.eps_zero);
}

namespace {

bool piece_contains_piece(const ConvexPolyhedron& outer, const GeneratorRep& inner, const Tolerance& tol) {
  for (const Vec& r : inner.rays)
    if (!cone_contains(outer, r, tol)) return false;
  for (const Vec& l : inner.lines)
    if (!cone_contains(outer, l, tol) || !cone_contains(outer, Vec(-l), tol)) return false;
  return true;
}

}  // namespace

PolyhedralCone prune_pieces(const PolyhedralCone& K, const Tolerance& tol) {
  const std::size_t m = K.pieces.size();
  if (m <= 1) return K;
  std::vector<GeneratorRep> gens;
  for (const auto& P : K.pieces) gens.push_back(generators(P, tol));
  std::vector<bool> drop(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      if (!piece_contains_piece(K.pieces[j], gens[i], tol)) continue;
      // Equal pieces: keep the lower index.
      const bool mutual = piece_contains_piece(K.pieces[i], gens[j], tol);
      if (!mutual || j < i) drop[i] = true;
    }
  }
  PolyhedralCone out(K.dim);
  for (std::size_t i = 0; i < m; ++i)
    if (!drop[i]) out.pieces.push_back(K.pieces[i]);
  return out;
}

PolyhedralCone limiting_normal_cone(const PolyhedralSet& S, const Vec& z, const Tolerance& tol) {
  const PolyhedralCone T = tangent_cone(S, z, tol);
  PolyhedralCone N(S.dim);
  for (const Cell& c : cells(T, tol)) N.pieces.push_back(polar(tangent_cone(T, c.rep_point, tol), tol));
  return prune_pieces(N, tol);
}

PolyhedralCone directional_limiting_normal_cone(const DirectionalContext& ctx, const Tolerance& tol) {
  ctx.validate(tol);
  const PolyhedralCone T = tangent_cone(ctx.S, ctx.z, tol);
  if (!cone_contains(T, ctx.w, tol)) return PolyhedralCone::empty(ctx.S.dim);
  return limiting_normal_cone(T, ctx.w, tol);
}

PolyhedralCone directional_proximal_normal_cone(const DirectionalContext& ctx, const Tolerance& tol) {
  ctx.validate(tol);
  const PolyhedralCone T = tangent_cone(ctx.S, ctx.z, tol);
  if (!cone_contains(T, ctx.w, tol)) return PolyhedralCone::empty(ctx.S.dim);
  return PolyhedralCone(regular_normal_cone(T, ctx.w, tol));
}

PolyhedralCone clarke_directional_normal_cone(const DirectionalContext& ctx, const Tolerance& tol) {
  const PolyhedralCone N = directional_limiting_normal_cone(ctx, tol);
  if (N.is_empty_marker()) return N;
  return PolyhedralCone(from_hrep(dd_v_to_h(merged_generators(N, tol), tol), ctx.S.dim));
}

ConvexPolyhedron directional_regular_tangent_cone(const DirectionalContext& ctx, const Tolerance& tol) {
  return polar(directional_limiting_normal_cone(ctx, tol), tol);
}

bool sum_contains(const PolyhedralCone& K1, const PolyhedralCone& K2, const Vec& v, const Tolerance& tol) {
  const Eigen::Index n = K1.dim;
  require_dims(K2.dim == n && v.size() == n, "sum_contains dimensions");
  const double s = std::max(linalg::inf_norm(v), 1e-300);
  const Vec vn = linalg::inf_norm(v) > 0 ? Vec(v / s) : v;
  for (const auto& P : K1.pieces) {
    for (const auto& Q : K2.pieces) {
      // a in P, b in Q, a + b = v.
      LpProblem lp = LpProblem::feasibility(2 * n);
      lp.A_ineq = Mat::Zero(P.num_ineq() + Q.num_ineq(), 2 * n);
      if (P.num_ineq()) lp.A_ineq.topLeftCorner(P.num_ineq(), n) = P.A;
      if (Q.num_ineq()) lp.A_ineq.bottomRightCorner(Q.num_ineq(), n) = Q.A;
      lp.b_ineq = Vec::Zero(lp.A_ineq.rows());
      lp.A_eq = Mat::Zero(P.num_eq() + Q.num_eq() + n, 2 * n);
      if (P.num_eq()) lp.A_eq.topLeftCorner(P.num_eq(), n) = P.E;
      if (Q.num_eq()) lp.A_eq.block(P.num_eq(), n, Q.num_eq(), n) = Q.E;
      lp.A_eq.bottomLeftCorner(n, n) = Mat::Identity(n, n);
      lp.A_eq.bottomRightCorner(n, n) = Mat::Identity(n, n);
      lp.b_eq = Vec::Zero(lp.A_eq.rows());
      lp.b_eq.tail(n) = vn;
      if (solve_lp(lp, tol).optimal()) return true;
    }
  }
  return false;
}

std::vector<Vec> cone_probes(const PolyhedralCone& K1, const PolyhedralCone& K2, std::size_t count,
                             std::uint64_t seed, const Tolerance& tol) {
  const Eigen::Index n = std::max(K1.dim, K2.dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Vec> probes;
  std::vector<GeneratorRep> gens;
  for (const PolyhedralCone* K : {&K1, &K2})
    for (const auto& P : K->pieces) gens.push_back(generators(P, tol));
  for (const auto& g : gens) {
    for (const Vec& r : g.rays) probes.push_back(r);
    for (const Vec& l : g.lines) {
      probes.push_back(l);
      probes.push_back(-l);
    }
  }
  std::size_t k = 0;
  while (probes.size() < count) {
    Vec v = Vec::Zero(n);
    if (!gens.empty() && k % 3 != 2) {
      // Sparse combinations land on faces; dense ones in relative interiors.
      const auto& g = gens[k % gens.size()];
      const bool sparse = k % 3 == 1;
      for (const Vec& r : g.rays)
        if (!sparse || gauss(rng) > 0) v += std::abs(gauss(rng)) * r;
      for (const Vec& l : g.lines) v += gauss(rng) * l;
      if (k % 5 == 0) v += 1e-3 * Vec::NullaryExpr(n, [&]() { return gauss(rng); });
    } else {
      v = Vec::NullaryExpr(n, [&]() { return gauss(rng); });
    }
    ++k;
    if (linalg::inf_norm(v) > 0) probes.push_back(v);
  }
  return probes;
}

AgreementReport compare_cones_serial(const PolyhedralCone& K1, const PolyhedralCone& K2,
                                     const std::vector<Vec>& probes, const Tolerance& tol) {
  AgreementReport r;
  r.probes = probes.size();
  for (const Vec& v : probes) {
    if (cone_contains(K1, v, tol) != cone_contains(K2, v, tol)) {
      ++r.disagreements;
      if (r.witnesses.size() < 5) r.witnesses.push_back(v);
    }
  }
  return r;
}

AgreementReport compare_cones(const PolyhedralCone& K1, const PolyhedralCone& K2,
                              const std::vector<Vec>& probes, const Tolerance& tol) {
  const long m = static_cast<long>(probes.size());
  std::vector<char> bad(probes.size(), 0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < m; ++i)
    bad[i] = cone_contains(K1, probes[i], tol) != cone_contains(K2, probes[i], tol);
  AgreementReport r;
  r.probes = probes.size();
  for (long i = 0; i < m; ++i) {
    if (!bad[i]) continue;
    ++r.disagreements;
    if (r.witnesses.size() < 5) r.witnesses.push_back(probes[i]);
  }
  return r;
}

}  // namespace djopt
