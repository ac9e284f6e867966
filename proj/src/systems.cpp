#include "djopt/systems.hpp"

#include <algorithm>
#include <cmath>

#include "djopt/dd.hpp"
#include "djopt/error.hpp"
#include "djopt/lp.hpp"

namespace djopt {

namespace {

constexpr int kKappaMaxRows = 12;

// {p : J p + c in K}
ConvexPolyhedron preimage(const ConvexPolyhedron& K, const Mat& J, const Vec& c) {
  ConvexPolyhedron P(K.A * J, K.b - K.A * c, K.E * J, K.f - K.E * c);
  P.dim = J.cols();
  return P;
}

PolyhedralSet preimage(const PolyhedralSet& K, const Mat& J, const Vec& c) {
  PolyhedralSet out(J.cols());
  for (const auto& P : K.pieces) out.pieces.push_back(preimage(P, J, c));
  return out;
}

double scale_of(const Vec& v) { return std::max(1.0, linalg::inf_norm(v)); }

// y in piece N with J^T y = x*, |y|_inf <= radius (if given), minimizing or
// maximizing <obj, y> (or |y|_inf when obj is empty).
LpOutcome multiplier_lp(const ConvexPolyhedron& N, const Mat& J, const Vec& xstar, const Vec& obj, Sense sense,
                        std::optional<double> radius, const Tolerance& tol) {
  const Eigen::Index d = J.rows();
  const bool minnorm = obj.size() == 0 && d > 0;  // with d = 0 the norm is 0 anyway
  const Eigen::Index nv = d + (minnorm ? 1 : 0);
  LpProblem lp = LpProblem::feasibility(nv);
  lp.sense = sense;
  if (minnorm) {
    lp.sense = Sense::Min;
    lp.c(d) = 1.0;
  } else {
    lp.c.head(d) = obj;
  }
  std::vector<Mat> rows;
  std::vector<Vec> rhs;
  if (N.num_ineq()) {
    Mat a = Mat::Zero(N.num_ineq(), nv);
    a.leftCols(d) = N.A;
    rows.push_back(a);
    rhs.push_back(N.b);
  }
  if (minnorm) {
    Mat a = Mat::Zero(2 * d, nv);
    a.block(0, 0, d, d) = Mat::Identity(d, d);
    a.block(d, 0, d, d) = -Mat::Identity(d, d);
    a.col(d).setConstant(-1.0);
    rows.push_back(a);
    rhs.push_back(Vec::Zero(2 * d));
  }
  if (radius) {
    Mat a = Mat::Zero(2 * d, nv);
    a.block(0, 0, d, d) = Mat::Identity(d, d);
    a.block(d, 0, d, d) = -Mat::Identity(d, d);
    rows.push_back(a);
    rhs.push_back(Vec::Constant(2 * d, *radius));
  }
  Eigen::Index m = 0;
  for (const auto& r : rows) m += r.rows();
  lp.A_ineq = Mat(m, nv);
  lp.b_ineq = Vec(m);
  m = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lp.A_ineq.middleRows(m, rows[i].rows()) = rows[i];
    lp.b_ineq.segment(m, rows[i].rows()) = rhs[i];
    m += rows[i].rows();
  }
  lp.A_eq = Mat::Zero(N.num_eq() + J.cols(), nv);
  lp.b_eq = Vec::Zero(lp.A_eq.rows());
  if (N.num_eq()) {
    lp.A_eq.topLeftCorner(N.num_eq(), d) = N.E;
    lp.b_eq.head(N.num_eq()) = N.f;
  }
  lp.A_eq.bottomLeftCorner(J.cols(), d) = J.transpose();
  lp.b_eq.tail(J.cols()) = xstar;
  return solve_lp(lp, tol);
}

}  // namespace

void SystemPoint::validate(const Tolerance& tol) const {
  require_dims(map.value.size() == D.dim && map.jacobian.rows() == D.dim, "system: G dimension vs D");
  require_dims(xbar.size() == map.jacobian.cols(), "system: xbar dimension vs Jacobian");
  require_dims(map.hessians.size() == static_cast<std::size_t>(D.dim), "system: one Hessian per component");
  if (kappa && !(*kappa > 0)) fail(ErrorCode::InvalidArgument, "kappa must be positive");
  if (!contains(D, map.value, tol)) fail(ErrorCode::PointNotInSet, "G(xbar) is not in D");
}

SystemPoint make_system(const std::vector<Expr>& G, const PolyhedralSet& D, const Vec& xbar,
                        std::optional<double> kappa) {
  for (const auto& g : G)
    require_dims(g.max_var() <= xbar.size(), "expression uses a variable beyond the point dimension");
  SystemPoint sp{xbar, D, differentiate_at(G, xbar), kappa};
  sp.validate();
  return sp;
}

SystemPoint identity_system(const PolyhedralSet& D, const Vec& z) {
  const Eigen::Index n = z.size();
  SmoothMapAtPoint m{z, Mat::Identity(n, n), std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n))};
  SystemPoint sp{z, D, m, std::nullopt};
  sp.validate();
  return sp;
}

DirectionalSystem DirectionalSystem::make(SystemPoint sp, const Vec& u, const Tolerance& tol) {
  sp.validate(tol);
  require_dims(u.size() == sp.n(), "direction dimension");
  DirectionalSystem ds;
  ds.base = std::move(sp);
  ds.u = u;
  ds.v = ds.J() * u;
  // round-off from cancellation in grad G u
  const double jn = ds.J().size() ? ds.J().cwiseAbs().maxCoeff() : 0.0;
  const double vs = tol.eps_zero * std::max(1.0, jn * linalg::inf_norm(u));
  for (Eigen::Index i = 0; i < ds.v.size(); ++i)
    if (std::abs(ds.v(i)) <= vs) ds.v(i) = 0.0;
  ds.c = second_directional(ds.base.map, u);
  ds.TD = tangent_cone(ds.base.D, ds.base.map.value, tol);
  if (!cone_contains(ds.TD, ds.v, tol))
    fail(ErrorCode::AssumptionViolated, "direction u is not in the linearization cone");
  ds.TTD = tangent_cone(ds.TD, ds.v, tol);
  ds.N = limiting_normal_cone(ds.TD, ds.v, tol);
  ds.Nhat = regular_normal_cone(ds.TD, ds.v, tol);
  return ds;
}

PolyhedralCone linearization_cone(const SystemPoint& sp, const Tolerance& tol) {
  sp.validate(tol);
  const PolyhedralCone TD = tangent_cone(sp.D, sp.map.value, tol);
  return preimage(TD, sp.J(), Vec::Zero(sp.d()));
}

CheckResult foscms_check(const DirectionalSystem& ds, const Tolerance& tol) {
  CheckResult r;
  for (const auto& P : ds.N.pieces) {
    const GeneratorRep g = dd_h_to_v(P.A, linalg::vstack(P.E, Mat(ds.J().transpose())), tol);
    if (g.is_zero()) continue;
    r.holds = false;
    r.certificate = g.rays.empty() ? g.lines.front() : g.rays.front();
    return r;
  }
  return r;
}

CheckResult nondegeneracy_check(const DirectionalSystem& ds, const Tolerance& tol) {
  CheckResult r;
  const Mat S = cone_span(ds.N, tol);
  if (S.cols() == 0) return r;
  const Mat K = linalg::null_space(ds.J().transpose() * S, tol.eps_zero);
  if (K.cols() == 0) return r;
  r.holds = false;
  r.certificate = linalg::normalized_inf(S * K.col(0));
  return r;
}

CheckResult generalized_nondegeneracy_check(const DirectionalSystem& ds, const Tolerance& tol) {
  CheckResult r;
  const Mat S = cone_span(ds.N, tol);
  if (S.cols() == 0) return r;
  const Mat K = linalg::null_space(ds.J().transpose() * S, tol.eps_zero);
  const double sc = scale_of(ds.c);
  for (Eigen::Index j = 0; j < K.cols(); ++j) {
    const Vec y = S * K.col(j);
    if (std::abs(y.dot(ds.c)) > tol.eps_feas * sc) {
      r.holds = false;
      r.certificate = y;
      return r;
    }
  }
  return r;
}

T2Gamma second_order_tangent_gamma(const DirectionalSystem& ds, const Tolerance& tol) {
  T2Gamma t;
  t.set = preimage(ds.TTD, ds.J(), ds.c);
  t.conditional = !foscms_check(ds, tol).holds;
  return t;
}

SupportT2Result support_T2_gamma(const DirectionalSystem& ds, const Vec& xstar, const Tolerance& tol) {
  require_dims(xstar.size() == ds.base.n(), "support_T2_gamma: dimension");
  SupportT2Result out;
  const T2Gamma t2 = second_order_tangent_gamma(ds, tol);
  out.conditional = t2.conditional;
  out.support = support_function(t2.set, xstar, tol);
  if (!out.support.value.is_finite()) return out;

  // Optimality system of the attaining piece: y* in N_{T_{T_D}(v)}(J p + c) with J^T y* = x*.
  const Vec q = ds.J() * *out.support.attaining_point + ds.c;
  const PolyhedralCone Nq = limiting_normal_cone(ds.TTD, q, tol);
  std::optional<double> best;
  for (const auto& P : Nq.pieces) {
    const LpOutcome o = multiplier_lp(P, ds.J(), xstar, Vec(), Sense::Min, std::nullopt, tol);
    if (!o.optimal()) continue;
    if (!best || o.value < *best - tol.eps_opt) {
      best = o.value;
      out.multiplier = o.x.head(ds.base.d());
    }
  }
  if (out.multiplier) {
    out.multiplier_in_lambda = cone_contains(ds.N, *out.multiplier, tol);
    return out;
  }
  // Fall back to the dual of the piece LP.
  const auto& K = ds.TTD.pieces[static_cast<std::size_t>(*out.support.attaining_piece)];
  const Vec& dual = *out.support.dual;
  Vec y = Vec::Zero(ds.base.d());
  if (K.num_ineq()) y += K.A.transpose() * dual.head(K.num_ineq());
  if (K.num_eq()) y += K.E.transpose() * dual.tail(K.num_eq());
  out.multiplier = y;
  out.multiplier_in_lambda = cone_contains(ds.N, y, tol);
  return out;
}

SecondSubderivative second_subderivative_gamma(const DirectionalSystem& ds, const Vec& xstar,
                                               const Tolerance& tol) {
  require_dims(xstar.size() == ds.base.n(), "second_subderivative_gamma: dimension");
  SecondSubderivative out;
  out.conditional = !foscms_check(ds, tol).holds;
  const double ip = xstar.dot(ds.u);
  const double sc = scale_of(xstar) * scale_of(ds.u);
  if (ip < -tol.eps_feas * sc) {
    out.value = ExtReal::plus_inf();
    return out;
  }
  if (ip > tol.eps_feas * sc) {
    out.value = ExtReal::minus_inf();
    return out;
  }
  const SupportT2Result s = support_T2_gamma(ds, xstar, tol);
  out.value = -s.support.value;
  out.in_domain = s.support.value.is_finite();
  out.multiplier = s.multiplier;
  return out;
}

bool MultiplierSet::contains(const Vec& y, const Tolerance& tol) const {
  require_dims(y.size() == Jt.cols(), "multiplier dimension");
  const Vec r = Jt * y - xstar;
  if (linalg::inf_norm(r) > tol.eps_feas * std::max(scale_of(xstar), scale_of(y))) return false;
  return cone_contains(cone, y, tol);
}

bool MultiplierSet::empty(const Tolerance& tol) const {
  for (const auto& P : cone.pieces)
    if (multiplier_lp(P, Jt.transpose(), xstar, Vec::Zero(Jt.cols()), Sense::Max, std::nullopt, tol).optimal())
      return false;
  return true;
}

std::vector<Extent> MultiplierSet::extents(const Tolerance& tol) const {
  const Eigen::Index d = Jt.cols();
  std::vector<Extent> ext(static_cast<std::size_t>(d), Extent{ExtReal::plus_inf(), ExtReal::minus_inf()});
  bool any = false;
  for (const auto& P : cone.pieces) {
    for (Eigen::Index i = 0; i < d; ++i) {
      auto& e = ext[static_cast<std::size_t>(i)];
      const Vec ei = Vec::Unit(d, i);
      const LpOutcome lo = multiplier_lp(P, Jt.transpose(), xstar, ei, Sense::Min, std::nullopt, tol);
      if (lo.infeasible()) break;
      any = true;
      e.lo = min(e.lo, lo.unbounded() ? ExtReal::minus_inf() : ExtReal(lo.value));
      const LpOutcome hi = multiplier_lp(P, Jt.transpose(), xstar, ei, Sense::Max, std::nullopt, tol);
      e.hi = max(e.hi, hi.unbounded() ? ExtReal::plus_inf() : ExtReal(hi.value));
    }
  }
  if (!any) ext.clear();
  return ext;
}

bool MultiplierSet::singleton(const Tolerance& tol) const {
  const auto ext = extents(tol);
  if (ext.empty()) return false;
  for (const auto& e : ext) {
    if (!e.lo.is_finite() || !e.hi.is_finite()) return false;
    if (e.hi.value() - e.lo.value() > tol.eps_feas * std::max(1.0, std::abs(e.hi.value()))) return false;
  }
  return true;
}

MultiplierSet multiplier_set(const DirectionalSystem& ds, const Vec& xstar, MultiplierKind kind) {
  require_dims(xstar.size() == ds.base.n(), "multiplier_set: dimension");
  MultiplierSet m;
  m.kind = kind;
  m.Jt = ds.J().transpose();
  m.xstar = xstar;
  m.cone = kind == MultiplierKind::M ? ds.N : PolyhedralSet(ds.Nhat);
  return m;
}

MultiplierBounds multiplier_bounds(const DirectionalSystem& ds, const Vec& xstar, std::optional<double> kappa,
                                   bool require_kappa, const Tolerance& tol) {
  require_dims(xstar.size() == ds.base.n(), "multiplier_bounds: dimension");
  if (!kappa) kappa = ds.base.kappa;
  if (!kappa && require_kappa) fail(ErrorCode::MissingKappa, "clipped multiplier bounds need kappa");
  MultiplierBounds b;
  std::optional<double> radius;
  if (kappa) {
    b.clipped = true;
    b.radius = *kappa * xstar.norm();
    radius = b.radius * (1.0 + tol.eps_feas) + tol.eps_feas;
  }
  for (const auto& P : ds.N.pieces) {
    const LpOutcome lo = multiplier_lp(P, ds.J(), xstar, ds.c, Sense::Min, radius, tol);
    if (lo.infeasible()) continue;
    b.lower = min(b.lower, lo.unbounded() ? ExtReal::minus_inf() : ExtReal(lo.value));
    const LpOutcome hi = multiplier_lp(P, ds.J(), xstar, ds.c, Sense::Max, radius, tol);
    b.upper = max(b.upper, hi.unbounded() ? ExtReal::plus_inf() : ExtReal(hi.value));
  }
  const LpOutcome s = multiplier_lp(ds.Nhat, ds.J(), xstar, ds.c, Sense::Max, std::nullopt, tol);
  if (s.optimal()) b.s_lower = s.value;
  else if (s.unbounded()) b.s_lower = ExtReal::plus_inf();
  const double ip = xstar.dot(ds.u);
  if (std::abs(ip) <= tol.eps_feas * scale_of(xstar) * scale_of(ds.u)) {
    const SupportT2Result st = support_T2_gamma(ds, xstar, tol);
    if (st.multiplier_in_lambda) b.attaining = st.multiplier;
  }
  return b;
}

LowerSupportT2 lower_support_T2_gamma_detail(const DirectionalSystem& ds, const Vec& xstar,
                                             const Tolerance& tol) {
  require_dims(xstar.size() == ds.base.n(), "lower_support_T2_gamma: dimension");
  if (!generalized_nondegeneracy_check(ds, tol).holds)
    fail(ErrorCode::AssumptionViolated, "generalized nondegeneracy fails; use multiplier_bounds");
  const Eigen::Index d = ds.base.d(), n = ds.base.n();
  // Common lineality of the pieces of T_{T_D}(v).
  Mat perp(0, d);
  for (const auto& P : ds.TTD.pieces)
    perp = linalg::vstack(perp, linalg::orthogonal_complement(lineality_space(P, tol), d, tol.eps_zero).transpose());
  const Mat L = linalg::null_space(perp, tol.eps_zero);
  // Minimal-norm (p0, l) with J p0 - L l = -c.
  Mat M(d, n + L.cols());
  M << ds.J(), -L;
  const Vec sol = M.completeOrthogonalDecomposition().solve(Vec(-ds.c));
  if (linalg::inf_norm(Vec(M * sol + ds.c)) > tol.eps_feas * scale_of(ds.c))
    fail(ErrorCode::AssumptionViolated, "no p0 with grad G p0 + c in the lineality space");
  LowerSupportT2 out;
  out.p0 = sol.head(n);
  out.K = preimage(ds.TTD, ds.J(), Vec::Zero(d));
  const PolyhedralCone NK = limiting_normal_cone(out.K, Vec::Zero(n), tol);
  out.value = cone_contains(NK, xstar, tol) ? ExtReal(xstar.dot(out.p0)) : ExtReal::plus_inf();
  return out;
}

ExtReal lower_support_T2_gamma(const DirectionalSystem& ds, const Vec& xstar, const Tolerance& tol) {
  return lower_support_T2_gamma_detail(ds, xstar, tol).value;
}

NormalEqualities directional_normal_equalities(const DirectionalSystem& ds, const Tolerance& tol) {
  NormalEqualities out;
  const Mat Jt = ds.J().transpose();
  for (const auto& P : ds.N.pieces) {
    const GeneratorRep g = generators(P, tol);
    GeneratorRep img;
    img.dim = ds.base.n();
    for (const Vec& r : g.rays)
      if (!(Jt * r).isZero(tol.eps_zero)) img.rays.push_back(Jt * r);
    for (const Vec& l : g.lines)
      if (!(Jt * l).isZero(tol.eps_zero)) img.lines.push_back(Jt * l);
    out.image.pieces.push_back(from_hrep(dd_v_to_h(img, tol), ds.base.n()));
  }
  out.image.dim = ds.base.n();
  out.image = prune_pieces(out.image, tol);
  out.certified = nondegeneracy_check(ds, tol).holds;
  out.foscms = foscms_check(ds, tol).holds;
  return out;
}

namespace {

// min over v >= 0, sum v = 1 of |M_J^T v|_1.
double hoffman_mu(const Mat& MJ, const Tolerance& tol) {
  const Eigen::Index k = MJ.rows(), n = MJ.cols();
  LpProblem lp = LpProblem::feasibility(k + n);
  lp.sense = Sense::Min;
  lp.c.tail(n).setOnes();
  lp.A_ineq = Mat::Zero(2 * n + k, k + n);
  lp.A_ineq.block(0, 0, n, k) = MJ.transpose();
  lp.A_ineq.block(0, k, n, n) = -Mat::Identity(n, n);
  lp.A_ineq.block(n, 0, n, k) = -MJ.transpose();
  lp.A_ineq.block(n, k, n, n) = -Mat::Identity(n, n);
  lp.A_ineq.block(2 * n, 0, k, k) = -Mat::Identity(k, k);
  lp.b_ineq = Vec::Zero(2 * n + k);
  lp.A_eq = Mat::Zero(1, k + n);
  lp.A_eq.block(0, 0, 1, k).setOnes();
  lp.b_eq = Vec::Ones(1);
  const LpOutcome o = solve_lp(lp, tol);
  return o.optimal() ? o.value : 0.0;
}

// Hoffman constant of {x : M x <= m} for the max-norm on x and on residuals:
// max over subsets J with M_J x < 0 solvable of 1 / mu_J.
double hoffman_constant(const Mat& M, const Tolerance& tol) {
  const auto m = static_cast<int>(M.rows());
  if (m == 0) return 0.0;
  if (m > kKappaMaxRows) fail(ErrorCode::ScaleCapExceeded, "kappa oracle: too many rows in a piece");
  double H = 0.0;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<Eigen::Index> rows;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) rows.push_back(i);
    const double mu = hoffman_mu(M(rows, Eigen::all), tol);
    if (mu > 1e3 * tol.eps_zero) H = std::max(H, 1.0 / mu);
  }
  return H;
}

}  // namespace

KappaEstimate kappa_oracle(const DirectionalSystem& ds, const Tolerance& tol) {
  KappaEstimate k;
  for (const auto& K : ds.TTD.pieces) {
    const ConvexPolyhedron P = preimage(K, ds.J(), ds.c);
    if (!is_nonempty(P, tol)) {
      ++k.pieces_skipped;
      continue;
    }
    ++k.pieces_used;
    // Rows of the p-system; residual of row a at p is at most |a|_1 dist_inf(J p + c, K).
    const Mat R = linalg::vstack(K.A, K.E);
    Mat M = linalg::vstack(linalg::vstack(P.A, P.E), Mat(-P.E));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      if (M.row(i).cwiseAbs().maxCoeff() <= tol.eps_zero) continue;
      bool dup = false;
      for (Eigen::Index j : keep) dup = dup || (M.row(i) - M.row(j)).cwiseAbs().maxCoeff() <= tol.eps_zero;
      if (!dup) keep.push_back(i);
    }
    M = Mat(M(keep, Eigen::all));
    double rho = 0.0;
    for (Eigen::Index i = 0; i < R.rows(); ++i) rho = std::max(rho, R.row(i).cwiseAbs().sum());
    k.kappa = std::max(k.kappa, hoffman_constant(M, tol) * rho);
  }
  if (k.pieces_used == 0) fail(ErrorCode::EmptySet, "kappa oracle: the linearized preimage is empty");
  return k;
}

double phi_residual(const DirectionalSystem& ds, const Vec& p, const Tolerance& tol) {
  return distance_inf(ds.TTD, Vec(ds.J() * p + ds.c), tol).value;
}

double preimage_distance(const DirectionalSystem& ds, const Vec& p, const Tolerance& tol) {
  return distance_inf(preimage(ds.TTD, ds.J(), ds.c), p, tol).value;
}

}  // namespace djopt
