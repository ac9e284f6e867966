#include "djopt/optimality.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

#include "djopt/dd.hpp"
#include "djopt/error.hpp"
#include "djopt/lp.hpp"
#include "djopt/oracles.hpp"

namespace djopt {

void ProblemPoint::validate(const Tolerance& tol) const {
  require_dims(f.jacobian.rows() == 1 && f.jacobian.cols() == n(), "objective derivative shape");
  require_dims(g.jacobian.cols() == n() && g.jacobian.rows() == D.dim, "constraint map vs D");
  if (!contains(D, g.value, tol)) fail(ErrorCode::PointNotInSet, "g(xbar) is not in D");
}

ProblemPoint make_problem(const Expr& objective, const std::vector<Expr>& constraints, const PolyhedralSet& D,
                          const Vec& xbar, std::optional<double> kappa) {
  require_dims(objective.max_var() <= xbar.size(), "objective uses a variable beyond the point dimension");
  for (const auto& g : constraints)
    require_dims(g.max_var() <= xbar.size(), "constraint uses a variable beyond the point dimension");
  ProblemPoint pp{objective, constraints, D, xbar, differentiate_at({objective}, xbar),
                  differentiate_at(constraints, xbar), kappa};
  if (constraints.empty()) pp.g.jacobian = Mat(0, xbar.size());
  pp.validate();
  return pp;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "Satisfied";
    case Verdict::Violated: return "Violated";
    case Verdict::Proven: return "Proven";
    case Verdict::Disproven: return "Disproven";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

struct RowRef {
  int k = -1;  // arrangement row, -1 for a zero row
  int sign = 1;
};

// Add row r (normalized in the max-norm) unless it is zero or parallel to a stored one.
RowRef add_row(std::vector<Vec>& rows, const Vec& r, const Tolerance& tol) {
  const double s = linalg::inf_norm(r);
  if (s <= tol.eps_zero) return {};
  const Vec a = r / s;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (linalg::near(rows[k], a, 1e-10)) return {static_cast<int>(k), 1};
    if (linalg::near(rows[k], Vec(-a), 1e-10)) return {static_cast<int>(k), -1};
  }
  rows.push_back(a);
  return {static_cast<int>(rows.size() - 1), 1};
}

// Is {u : sign(rows_k u) = signs_k for assigned k} nonempty? Returns a point.
std::optional<Vec> region_point(const std::vector<Vec>& rows, const std::vector<int>& signs, Eigen::Index n,
                                const Tolerance& tol) {
  std::vector<Vec> ineq, eq;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] == 0) eq.push_back(rows[k]);
    else ineq.push_back(signs[k] < 0 ? rows[k] : Vec(-rows[k]));
  }
  LpProblem lp = LpProblem::feasibility(n);
  lp.A_ineq = linalg::rows_to_matrix(ineq, n);
  lp.b_ineq = Vec::Constant(static_cast<Eigen::Index>(ineq.size()), -1.0);
  lp.A_eq = linalg::rows_to_matrix(eq, n);
  lp.b_eq = Vec::Zero(static_cast<Eigen::Index>(eq.size()));
  const LpOutcome o = solve_lp(lp, tol);
  if (!o.optimal()) return std::nullopt;
  return o.x;
}

Mat combine_hessians(const ProblemPoint& pp, double alpha, const Vec& lambda) {
  Mat Q = alpha * pp.hess_f();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) Q += lambda(i) * pp.g.hessians[static_cast<std::size_t>(i)];
  return 0.5 * (Q + Q.transpose());
}

double dist_to_D(const ProblemPoint& pp, const Vec& x, const Tolerance& tol) {
  if (pp.constraints.empty()) return 0.0;
  return distance_inf(pp.D, evaluate(pp.constraints, x), tol).value;
}

std::optional<Vec> project_feasible(const ProblemPoint& pp, const Vec& x, const Tolerance& tol) {
  if (pp.constraints.empty()) return x;
  const auto& G = pp.constraints;
  return gauss_newton_project([&G](const Vec& y) { return evaluate(G, y); },
                              [&G](const Vec& y) { return jacobian_at(G, y); }, pp.D, x, tol);
}

double rounding_slack(double a, double b, double c) {
  return 64 * DBL_EPSILON * (std::abs(a) + std::abs(b) + std::abs(c));
}

}  // namespace

CriticalCone critical_cone(const ProblemPoint& pp, const Tolerance& tol) {
  pp.validate(tol);
  const Eigen::Index n = pp.n();
  const Mat& J = pp.g.jacobian;
  const Vec gf = pp.grad_f();
  const PolyhedralCone TD = tangent_cone(pp.D, pp.g.value, tol);

  CriticalCone cc;
  cc.pieces = PolyhedralCone(n);
  for (const auto& K : TD.pieces) {
    const Mat AJ = K.A * J;
    cc.pieces.pieces.push_back(ConvexPolyhedron::cone(linalg::vstack(AJ, Mat(gf.transpose())), Mat(K.E * J)));
  }

  std::vector<Vec> rows;
  RowRef fref = add_row(rows, gf, tol);
  std::vector<std::vector<RowRef>> ineq_refs, eq_refs;
  for (const auto& K : TD.pieces) {
    std::vector<RowRef> ir, er;
    for (Eigen::Index i = 0; i < K.num_ineq(); ++i) ir.push_back(add_row(rows, Vec(J.transpose() * K.A.row(i).transpose()), tol));
    for (Eigen::Index i = 0; i < K.num_eq(); ++i) er.push_back(add_row(rows, Vec(J.transpose() * K.E.row(i).transpose()), tol));
    ineq_refs.push_back(std::move(ir));
    eq_refs.push_back(std::move(er));
  }
  if (static_cast<int>(rows.size()) > kArrangementMaxRows)
    fail(ErrorCode::ScaleCapExceeded, "critical cone: too many distinct hyperplanes");
  cc.rows = linalg::rows_to_matrix(rows, n);

  auto in_cone = [&](const std::vector<int>& s) {
    for (std::size_t j = 0; j < TD.pieces.size(); ++j) {
      bool ok = true;
      for (const RowRef& r : ineq_refs[j]) ok = ok && (r.k < 0 || r.sign * s[static_cast<std::size_t>(r.k)] <= 0);
      for (const RowRef& r : eq_refs[j]) ok = ok && (r.k < 0 || s[static_cast<std::size_t>(r.k)] == 0);
      if (ok) return true;
    }
    return false;
  };

  std::vector<int> signs;
  std::function<void()> rec = [&]() {
    const std::size_t k = signs.size();
    if (k == rows.size()) {
      if (!in_cone(signs)) return;
      CriticalRegion R;
      R.signs = signs;
      std::vector<Vec> A, E;
      for (std::size_t i = 0; i < k; ++i) {
        if (signs[i] == 0) E.push_back(rows[i]);
        else A.push_back(signs[i] < 0 ? rows[i] : Vec(-rows[i]));
      }
      R.closure = ConvexPolyhedron::cone(linalg::rows_to_matrix(A, n), linalg::rows_to_matrix(E, n));
      if (A.empty()) {
        const Mat Z = linalg::null_space(R.closure.E.rows() ? R.closure.E : Mat(0, n), tol.eps_zero);
        if (Z.cols() == 0) return;  // only the origin
        R.rep = Z.col(0);
      } else {
        R.rep = *region_point(rows, signs, n, tol);
      }
      R.rep = linalg::normalized_inf(R.rep);
      cc.regions.push_back(std::move(R));
      return;
    }
    for (int s : {-1, 0, 1}) {
      if (fref.k == static_cast<int>(k) && fref.sign * s > 0) continue;
      signs.push_back(s);
      if (region_point(rows, signs, n, tol)) rec();
      signs.pop_back();
    }
  };
  rec();
  return cc;
}

CheckReport necessary_check(const ProblemPoint& pp, const Vec& u, MultiplierMode mode, const Tolerance& tol) {
  pp.validate(tol);
  require_dims(u.size() == pp.n(), "necessary_check: direction dimension");
  const CriticalCone cc = critical_cone(pp, tol);
  if (!cone_contains(cc.pieces, u, tol)) fail(ErrorCode::InvalidArgument, "u is not a critical direction");
  const auto ds = DirectionalSystem::make(pp.system(), u, tol);
  const Vec xstar = -pp.grad_f();
  const double q0 = u.dot(pp.hess_f() * u);
  const MultiplierBounds b = multiplier_bounds(ds, xstar, std::nullopt, false, tol);

  CheckReport r;
  r.witness = u;
  const bool foscms = foscms_check(ds, tol).holds;
  ExtReal sup;
  if (mode == MultiplierMode::S) {
    sup = b.s_lower;
    if (!nondegeneracy_check(ds, tol).holds) {
      r.verdict = Verdict::Unknown;
      r.detail = "nondegeneracy fails in direction u";
      r.witness.reset();
      return r;
    }
  } else {
    sup = b.upper;
    r.conditional = !foscms;
  }
  const bool empty = sup.is_minus_inf() && (mode == MultiplierMode::S ? multiplier_set(ds, xstar, MultiplierKind::S).empty(tol)
                                                                        : b.lower.is_plus_inf());
  if (empty) {
    if (mode == MultiplierMode::M && !foscms) {
      r.verdict = Verdict::Unknown;
      r.detail = "no multiplier and FOSCMS fails";
      r.witness.reset();
    } else {
      r.verdict = Verdict::Violated;
      r.detail = "empty multiplier set";
    }
    return r;
  }
  if (sup.is_plus_inf()) {
    r.verdict = Verdict::Satisfied;
    r.detail = "supremum is +inf";
    r.witness.reset();
    return r;
  }
  const double value = q0 + sup.value();
  r.value = value;
  if (value >= -tol.eps_opt * std::max(1.0, std::abs(q0))) {
    r.verdict = Verdict::Satisfied;
    r.witness.reset();
  } else {
    r.verdict = Verdict::Violated;
    r.detail = "max of the Lagrangian curvature over the multipliers is negative";
  }
  return r;
}

CopositivityResult copositivity_test(const Mat& Qin, const ConvexPolyhedron& P, int depth, const Tolerance& tol) {
  require_dims(Qin.rows() == P.dim && Qin.cols() == P.dim, "copositivity: matrix vs cone dimension");
  if (!P.is_cone()) fail(ErrorCode::InvalidArgument, "copositivity: P is not a cone");
  const Eigen::Index n = P.dim;
  const Mat Q = 0.5 * (Qin + Qin.transpose());
  const double qs = std::max(1.0, Q.cwiseAbs().maxCoeff());
  CopositivityResult res;
  auto disproven = [&](Vec u) {
    u.normalize();
    if (u.dot(Q * u) <= 0) {
      res.status = CopositivityResult::Status::Disproven;
      res.witness = u;
    } else {
      res.status = CopositivityResult::Status::Unknown;
    }
    return res;
  };

  const Mat L = linalg::column_span(lineality_space(P, tol), tol.eps_zero);
  const Eigen::Index k = L.cols();
  double muL = std::numeric_limits<double>::infinity();
  Mat W = Mat::Zero(0, n);  // optimal lineality shift x = -L W y
  double c = 0;
  if (k > 0) {
    const Mat QLL = L.transpose() * Q * L;
    Eigen::SelfAdjointEigenSolver<Mat> es(QLL);
    muL = es.eigenvalues()(0);
    if (muL <= tol.eps_zero * qs) return disproven(L * es.eigenvectors().col(0));
    W = QLL.ldlt().solve(Mat(L.transpose() * Q));
    c = Eigen::JacobiSVD<Mat>(W).singularValues()(0);
  }
  const Mat Qs = k > 0 ? Mat(Q - Q * L * W) : Q;
  auto lift = [&](const Vec& y) -> Vec { return k > 0 ? Vec(y - L * (W * y)) : y; };

  std::vector<Vec> rays;
  if (k < n) {
    for (const Vec& r : generators(P, tol).rays) {
      Vec y = k > 0 ? Vec(r - L * (L.transpose() * r)) : r;
      const double s = y.norm();
      if (s <= tol.eps_zero) continue;
      y /= s;
      bool dup = false;
      for (const Vec& o : rays) dup = dup || linalg::near(o, y, 1e-12);
      if (!dup) rays.push_back(y);
    }
  }
  if (rays.empty()) {
    res.status = CopositivityResult::Status::Proven;
    res.margin = muL;
    return res;
  }
  const Mat R = linalg::cols_to_matrix(rays, n);
  const Eigen::Index m = R.cols();
  const Mat M = R.transpose() * Qs * R;
  const double pos = 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff());

  struct Simplex {
    Mat V;  // columns: vertices in the standard simplex of R^m
    int level;
  };
  std::deque<Simplex> queue{{Mat::Identity(m, m), 0}};
  double margin_b = std::numeric_limits<double>::infinity();
  while (!queue.empty()) {
    Simplex s = std::move(queue.front());
    queue.pop_front();
    ++res.simplices;
    const Mat G = s.V.transpose() * M * s.V;
    for (Eigen::Index i = 0; i < m; ++i)
      if (G(i, i) <= 0) return disproven(lift(R * s.V.col(i)));
    double dmin = G.diagonal().minCoeff(), omin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j) omin = std::min(omin, G(i, j));
    if (m == 1) omin = dmin;
    if (dmin > pos && omin >= 0) {
      margin_b = std::min(margin_b, std::max(std::min(dmin, omin), dmin / static_cast<double>(m)));
      continue;
    }
    if (s.level >= depth || res.simplices + static_cast<int>(queue.size()) >= kCopositivityMaxSimplices) {
      res.status = CopositivityResult::Status::Unknown;
      return res;
    }
    Eigen::Index bi = 0, bj = 1;
    double best = -1;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j) {
        const double e = (R * (s.V.col(i) - s.V.col(j))).norm();
        if (e > best) best = e, bi = i, bj = j;
      }
    const Vec mid = 0.5 * (s.V.col(bi) + s.V.col(bj));
    Simplex a{s.V, s.level + 1}, b{s.V, s.level + 1};
    a.V.col(bi) = mid;
    b.V.col(bj) = mid;
    queue.push_back(std::move(a));
    queue.push_back(std::move(b));
  }
  res.status = CopositivityResult::Status::Proven;
  // Q(x + y) >= muL |x - x*(y)|^2 + margin_b |y|^2 with |x*(y)| <= c |y|.
  res.margin = k > 0 ? std::min(muL / 2, margin_b / (2 * c * c + 1)) : margin_b;
  return res;
}

namespace {

struct Candidate {
  double alpha;
  Vec lambda;
};

// argmax <lambda, obj> over {lambda in N, J^T lambda = -alpha grad f, |lambda|_inf <= box}.
std::optional<Vec> best_multiplier(const ConvexPolyhedron& N, const Mat& J, const Vec& rhs, const Vec& obj,
                                   double box, const Tolerance& tol) {
  const Eigen::Index d = J.rows();
  LpProblem lp = LpProblem::feasibility(d);
  lp.sense = Sense::Max;
  lp.c = obj;
  lp.A_ineq = linalg::vstack(linalg::vstack(N.A, Mat(Mat::Identity(d, d))), Mat(-Mat::Identity(d, d)));
  lp.b_ineq = Vec::Zero(lp.A_ineq.rows());
  lp.b_ineq.tail(2 * d).setConstant(box);
  lp.A_eq = linalg::vstack(N.E, Mat(J.transpose()));
  lp.b_eq = Vec::Zero(lp.A_eq.rows());
  lp.b_eq.tail(J.cols()) = rhs;
  const LpOutcome o = solve_lp(lp, tol);
  if (!o.optimal()) return std::nullopt;
  return o.x;
}

double min_norm_multiplier(const ConvexPolyhedron& N, const Mat& J, const Vec& rhs, const Tolerance& tol) {
  const Eigen::Index d = J.rows();
  LpProblem lp = LpProblem::feasibility(d + 1);
  lp.sense = Sense::Min;
  lp.c(d) = 1.0;
  Mat A = Mat::Zero(N.num_ineq() + 2 * d, d + 1);
  A.topLeftCorner(N.num_ineq(), d) = N.A;
  A.block(N.num_ineq(), 0, d, d) = Mat::Identity(d, d);
  A.block(N.num_ineq() + d, 0, d, d) = -Mat::Identity(d, d);
  A.block(N.num_ineq(), d, 2 * d, 1).setConstant(-1.0);
  lp.A_ineq = A;
  lp.b_ineq = Vec::Zero(A.rows());
  lp.A_eq = Mat::Zero(N.num_eq() + J.cols(), d + 1);
  lp.A_eq.topLeftCorner(N.num_eq(), d) = N.E;
  lp.A_eq.bottomLeftCorner(J.cols(), d) = J.transpose();
  lp.b_eq = Vec::Zero(lp.A_eq.rows());
  lp.b_eq.tail(J.cols()) = rhs;
  const LpOutcome o = solve_lp(lp, tol);
  return o.optimal() ? o.value : -1.0;
}

std::vector<Candidate> candidates(const ProblemPoint& pp, const ConvexPolyhedron& N, const Vec& rep,
                                  const Tolerance& tol) {
  const Mat& J = pp.g.jacobian;
  const Eigen::Index d = pp.d();
  const Vec gf = pp.grad_f();
  const Vec c = d ? second_directional(pp.g, rep) : Vec(0);
  std::vector<Candidate> out;
  auto push = [&](double alpha, const Vec& l) {
    if (alpha == 0 && linalg::inf_norm(l) <= tol.eps_feas) return;
    for (const auto& o : out)
      if (o.alpha == alpha && linalg::near(o.lambda, l, 1e-9)) return;
    out.push_back({alpha, l});
  };

  // alpha = 1
  const double r0 = d ? min_norm_multiplier(N, J, -gf, tol) : (linalg::inf_norm(gf) <= tol.eps_feas ? 0.0 : -1.0);
  if (r0 >= 0) {
    const double box = std::max(1.0, 4 * r0);
    if (d == 0) {
      push(1.0, Vec(0));
    } else {
      if (auto l = best_multiplier(N, J, -gf, c, box, tol)) push(1.0, *l);
      // vertices of the boxed multiplier polyhedron, via its homogenization in (lambda, t)
      try {
        Mat A = Mat::Zero(N.num_ineq() + 2 * d + 1, d + 1);
        A.topLeftCorner(N.num_ineq(), d) = N.A;
        A.block(N.num_ineq(), 0, d, d) = Mat::Identity(d, d);
        A.block(N.num_ineq() + d, 0, d, d) = -Mat::Identity(d, d);
        A.block(N.num_ineq(), d, 2 * d, 1).setConstant(-box);
        A(A.rows() - 1, d) = -1.0;
        Mat E = Mat::Zero(N.num_eq() + pp.n(), d + 1);
        E.topLeftCorner(N.num_eq(), d) = N.E;
        E.bottomLeftCorner(pp.n(), d) = J.transpose();
        E.bottomRightCorner(pp.n(), 1) = gf;
        const GeneratorRep g = dd_h_to_v(A, E, tol);
        std::vector<Vec> verts;
        for (const Vec& r : g.rays)
          if (r(d) > tol.eps_zero) verts.push_back(r.head(d) / r(d));
        Vec bary = Vec::Zero(d);
        for (const Vec& v : verts) {
          push(1.0, v);
          bary += v / static_cast<double>(verts.size());
        }
        if (!verts.empty()) push(1.0, bary);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ScaleCapExceeded) throw;
      }
    }
  }
  // alpha = 0
  if (d > 0) {
    if (auto l = best_multiplier(N, J, Vec::Zero(pp.n()), c, 1.0, tol)) push(0.0, *l);
    try {
      const GeneratorRep g = dd_h_to_v(N.A, linalg::vstack(N.E, Mat(J.transpose())), tol);
      for (const Vec& r : g.rays) push(0.0, r);
      for (const Vec& l : g.lines) {
        push(0.0, l);
        push(0.0, -l);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ScaleCapExceeded) throw;
    }
  }
  return out;
}

}  // namespace

CheckReport sufficient_check(const ProblemPoint& pp, int depth, const Tolerance& tol) {
  const CriticalCone cc = critical_cone(pp, tol);
  const PolyhedralCone TD = tangent_cone(pp.D, pp.g.value, tol);
  CheckReport r;
  r.margin = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> failing;
  for (std::size_t i = 0; i < cc.regions.size(); ++i) {
    const CriticalRegion& R = cc.regions[i];
    const ConvexPolyhedron N = pp.d() ? regular_normal_cone(TD, Vec(pp.g.jacobian * R.rep), tol)
                                      : ConvexPolyhedron::whole(0);
    CheckReport part;
    part.witness = R.rep;
    std::optional<Candidate> best;
    for (const Candidate& c : candidates(pp, N, R.rep, tol)) {
      const CopositivityResult cr = copositivity_test(combine_hessians(pp, c.alpha, c.lambda), R.closure, depth, tol);
      if (cr.status != CopositivityResult::Status::Proven) continue;
      // growth rate of the second-order term: L(xbar + u) - L(xbar) ~ Q(u) / 2
      if (!best || cr.margin / 2 > part.margin) {
        best = c;
        part.margin = cr.margin / 2;
      }
    }
    if (best) {
      part.verdict = Verdict::Proven;
      part.certificates.push_back({best->alpha, best->lambda});
      r.certificates.push_back({best->alpha, best->lambda});
      r.margin = std::min(r.margin, part.margin);
    } else {
      part.verdict = Verdict::Unknown;
      part.detail = "no candidate multiplier certifies this region";
      failing.push_back(i);
    }
    r.parts.push_back(std::move(part));
  }
  if (cc.regions.empty()) {
    r.verdict = Verdict::Proven;
    r.detail = "critical cone is {0}";
    return r;
  }
  if (failing.empty()) {
    r.verdict = Verdict::Proven;
  } else {
    r.verdict = Verdict::Unknown;
    r.margin = 0;
    r.detail = "uncertified regions:";
    for (std::size_t i : failing) r.detail += " " + std::to_string(i);
  }
  return r;
}

std::optional<Vec> descent_witness(const ProblemPoint& pp, const Vec& u_in, double delta, const Tolerance& tol) {
  require_dims(u_in.size() == pp.n(), "descent_witness: direction dimension");
  if (u_in.norm() == 0) return std::nullopt;
  const Vec u = u_in / u_in.norm();
  const Vec gf = pp.grad_f();
  Vec p = Vec::Zero(pp.n());
  if (pp.d() > 0) {
    const auto ds = DirectionalSystem::make(pp.system(), u, tol);
    const PolyhedralSet T2 = second_order_tangent_gamma(ds, tol).set;
    const double box = 10 * (1 + linalg::inf_norm(ds.c));
    PolyhedralSet boxed(pp.n());
    for (const auto& P : T2.pieces) {
      ConvexPolyhedron B(linalg::vstack(Mat(Mat::Identity(pp.n(), pp.n())), Mat(-Mat::Identity(pp.n(), pp.n()))),
                         Vec::Constant(2 * pp.n(), box), Mat(0, pp.n()), Vec(0));
      B.dim = pp.n();
      boxed.pieces.push_back(intersect(P, B));
    }
    const SupportResult s = support_function(boxed, -gf, tol);
    if (s.attaining_point) p = *s.attaining_point;
  }
  const double f0 = pp.objective.eval(pp.xbar);
  for (int k = 0; k < 60; ++k) {
    const double t = delta * std::pow(0.8, k);
    const Vec x0 = pp.xbar + t * u + 0.5 * t * t * p;
    const auto x = project_feasible(pp, x0, tol);
    if (!x) continue;
    if ((*x - pp.xbar).norm() > delta) continue;
    if (dist_to_D(pp, *x, tol) > 1e-10 * point_scale(*x)) continue;
    const double fx = pp.objective.eval(*x);
    if (fx < f0 - rounding_slack(fx, f0, 0)) return x;
  }
  return std::nullopt;
}

Vec halton(long k, Eigen::Index n, std::uint64_t seed) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                               59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  if (n > 32) fail(ErrorCode::ScaleCapExceeded, "halton: dimension above 32");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Vec h(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int b = primes[i];
    double f = 1.0, r = 0.0;
    for (long q = k; q > 0; q /= b) {
      f /= b;
      r += f * static_cast<double>(q % b);
    }
    const double v = r + U(rng);
    h(i) = v - std::floor(v);
  }
  return h;
}

Vec cube_to_ball(const Vec& h, const Vec& c, double r) {
  const Vec q = 2 * h - Vec::Ones(h.size());
  const double n2 = q.norm();
  if (n2 == 0) return c;
  return c + r * (linalg::inf_norm(q) / n2) * q;
}

namespace {

template <class Test>
SamplingResult run_samples(long samples, bool parallel, Test&& test) {
  std::vector<char> bad(static_cast<std::size_t>(std::max(0L, samples)), 0);
  std::vector<char> used(bad.size(), 0);
  std::vector<Vec> pts(bad.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < samples; ++k) test(k, bad[static_cast<std::size_t>(k)], used[static_cast<std::size_t>(k)], pts[static_cast<std::size_t>(k)]);
  } else {
    for (long k = 0; k < samples; ++k) test(k, bad[static_cast<std::size_t>(k)], used[static_cast<std::size_t>(k)], pts[static_cast<std::size_t>(k)]);
  }
  SamplingResult res;
  for (long k = 0; k < samples; ++k) {
    res.tested += used[static_cast<std::size_t>(k)];
    if (bad[static_cast<std::size_t>(k)] && res.holds) {
      res.holds = false;
      res.index = k;
      res.fails_at = pts[static_cast<std::size_t>(k)];
    }
  }
  return res;
}

SamplingResult essential_min_impl(const ProblemPoint& pp, double eps, double delta, long samples,
                                  std::uint64_t seed, const Tolerance& tol, bool parallel) {
  pp.validate(tol);
  const double f0 = pp.objective.eval(pp.xbar);
  return run_samples(samples, parallel, [&](long k, char& bad, char& used, Vec& pt) {
    const Vec x = cube_to_ball(halton(k + 1, pp.n(), seed), pp.xbar, delta);
    const double r2 = (x - pp.xbar).squaredNorm();
    pt = x;
    used = 1;
    if (r2 == 0) return;
    try {
      const double fx = pp.objective.eval(x);
      const double lhs = std::max(fx - f0, dist_to_D(pp, x, tol));
      bad = lhs < eps * r2 - rounding_slack(fx, f0, eps * r2);
    } catch (const Error&) {
      bad = 1;
    }
  });
}

SamplingResult growth_impl(const ProblemPoint& pp, double eps, double delta, long samples, std::uint64_t seed,
                           const Tolerance& tol, bool parallel) {
  pp.validate(tol);
  const double f0 = pp.objective.eval(pp.xbar);
  return run_samples(samples, parallel, [&](long k, char& bad, char& used, Vec& pt) {
    const Vec x0 = cube_to_ball(halton(k + 1, pp.n(), seed), pp.xbar, delta);
    try {
      const auto x = project_feasible(pp, x0, tol);
      if (!x || (*x - pp.xbar).norm() > delta) return;
      pt = *x;
      used = 1;
      const double r2 = (*x - pp.xbar).squaredNorm();
      const double fx = pp.objective.eval(*x);
      bad = fx - f0 < eps * r2 - rounding_slack(fx, f0, eps * r2);
    } catch (const Error&) {
      pt = x0;
      used = 1;
      bad = 1;
    }
  });
}

}  // namespace

SamplingResult essential_min_oracle(const ProblemPoint& pp, double eps, double delta, long samples,
                                    std::uint64_t seed, const Tolerance& tol) {
  return essential_min_impl(pp, eps, delta, samples, seed, tol, true);
}

SamplingResult essential_min_oracle_serial(const ProblemPoint& pp, double eps, double delta, long samples,
                                           std::uint64_t seed, const Tolerance& tol) {
  return essential_min_impl(pp, eps, delta, samples, seed, tol, false);
}

SamplingResult quadratic_growth_oracle(const ProblemPoint& pp, double eps, double delta, long samples,
                                       std::uint64_t seed, const Tolerance& tol) {
  return growth_impl(pp, eps, delta, samples, seed, tol, true);
}

SamplingResult quadratic_growth_oracle_serial(const ProblemPoint& pp, double eps, double delta, long samples,
                                              std::uint64_t seed, const Tolerance& tol) {
  return growth_impl(pp, eps, delta, samples, seed, tol, false);
}

}  // namespace djopt
