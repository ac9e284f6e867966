#include "djopt/polyhedra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "djopt/error.hpp"
#include "djopt/lp.hpp"

namespace djopt {

ConvexPolyhedron::ConvexPolyhedron(Mat A_, Vec b_, Mat E_, Vec f_)
    : A(std::move(A_)), b(std::move(b_)), E(std::move(E_)), f(std::move(f_)) {
  dim = A.rows() > 0 ? A.cols() : E.cols();
  if (A.rows() == 0) A = Mat(0, dim);
  if (E.rows() == 0) E = Mat(0, dim);
  validate();
}

ConvexPolyhedron ConvexPolyhedron::whole(Eigen::Index n) {
  ConvexPolyhedron p;
  p.dim = n;
  p.A = Mat(0, n);
  p.b = Vec(0);
  p.E = Mat(0, n);
  p.f = Vec(0);
  return p;
}

ConvexPolyhedron ConvexPolyhedron::cone(const Mat& A, const Mat& E) {
  const Eigen::Index n = A.rows() > 0 ? A.cols() : E.cols();
  ConvexPolyhedron p = whole(n);
  if (A.rows()) p.A = A;
  if (E.rows()) p.E = E;
  p.b = Vec::Zero(A.rows());
  p.f = Vec::Zero(E.rows());
  p.validate();
  return p;
}

bool ConvexPolyhedron::is_cone() const {
  return (b.size() == 0 || b.cwiseAbs().maxCoeff() == 0.0) &&
         (f.size() == 0 || f.cwiseAbs().maxCoeff() == 0.0);
}

void ConvexPolyhedron::validate() const {
  require_dims(A.rows() == b.size(), "piece: rows of A vs length of b");
  require_dims(E.rows() == f.size(), "piece: rows of E vs length of f");
  require_dims(A.cols() == dim && E.cols() == dim, "piece: column count vs ambient dimension");
}

PolyhedralSet::PolyhedralSet(Eigen::Index n, std::vector<ConvexPolyhedron> ps)
    : dim(n), pieces(std::move(ps)) {
  validate();
}

PolyhedralSet::PolyhedralSet(ConvexPolyhedron p) : dim(p.dim) { pieces.push_back(std::move(p)); }

bool PolyhedralSet::is_cone() const {
  return std::all_of(pieces.begin(), pieces.end(), [](const auto& p) { return p.is_cone(); });
}

void PolyhedralSet::validate() const {
  for (const auto& p : pieces) {
    p.validate();
    require_dims(p.dim == dim, "set: piece dimension differs from set dimension");
  }
}

double point_scale(const Vec& z) { return std::max(1.0, linalg::inf_norm(z)); }

bool contains(const ConvexPolyhedron& P, const Vec& z, const Tolerance& tol) {
  require_dims(z.size() == P.dim, "contains: point dimension");
  const double eps = tol.eps_feas * point_scale(z);
  if (P.num_ineq() && (P.A * z - P.b).maxCoeff() > eps) return false;
  if (P.num_eq() && (P.E * z - P.f).cwiseAbs().maxCoeff() > eps) return false;
  return true;
}

bool contains(const PolyhedralSet& S, const Vec& z, const Tolerance& tol) {
  require_dims(z.size() == S.dim, "contains: point dimension");
  return std::any_of(S.pieces.begin(), S.pieces.end(),
                     [&](const auto& p) { return contains(p, z, tol); });
}

std::vector<Eigen::Index> active_rows(const ConvexPolyhedron& P, const Vec& z, const Tolerance& tol) {
  std::vector<Eigen::Index> act;
  const double eps = tol.eps_feas * point_scale(z);
  for (Eigen::Index i = 0; i < P.num_ineq(); ++i)
    if (std::abs(P.A.row(i).dot(z) - P.b(i)) <= eps) act.push_back(i);
  return act;
}

namespace {

LpProblem piece_lp(const ConvexPolyhedron& P, Eigen::Index extra_vars) {
  LpProblem lp = LpProblem::feasibility(P.dim + extra_vars);
  lp.A_ineq = Mat::Zero(P.num_ineq(), P.dim + extra_vars);
  lp.A_ineq.leftCols(P.dim) = P.A;
  lp.b_ineq = P.b;
  lp.A_eq = Mat::Zero(P.num_eq(), P.dim + extra_vars);
  lp.A_eq.leftCols(P.dim) = P.E;
  lp.b_eq = P.f;
  return lp;
}

void add_ineq(LpProblem& lp, const Vec& row, double rhs) {
  lp.A_ineq.conservativeResize(lp.A_ineq.rows() + 1, lp.A_ineq.cols());
  lp.A_ineq.row(lp.A_ineq.rows() - 1) = row.transpose();
  lp.b_ineq.conservativeResize(lp.b_ineq.size() + 1);
  lp.b_ineq(lp.b_ineq.size() - 1) = rhs;
}

void add_eq(LpProblem& lp, const Vec& row, double rhs) {
  lp.A_eq.conservativeResize(lp.A_eq.rows() + 1, lp.A_eq.cols());
  lp.A_eq.row(lp.A_eq.rows() - 1) = row.transpose();
  lp.b_eq.conservativeResize(lp.b_eq.size() + 1);
  lp.b_eq(lp.b_eq.size() - 1) = rhs;
}

Vec padded(const Vec& a, Eigen::Index total) {
  Vec v = Vec::Zero(total);
  v.head(a.size()) = a;
  return v;
}

}  // namespace

bool is_nonempty(const ConvexPolyhedron& P, const Tolerance& tol) {
  return solve_lp(piece_lp(P, 0), tol).optimal();
}

PolyhedralCone tangent_cone(const PolyhedralSet& S, const Vec& z, const Tolerance& tol) {
  require_dims(z.size() == S.dim, "tangent_cone: point dimension");
  PolyhedralCone T(S.dim);
  for (const auto& P : S.pieces) {
    if (!contains(P, z, tol)) continue;
    const auto act = active_rows(P, z, tol);
    Mat A(static_cast<Eigen::Index>(act.size()), S.dim);
    for (std::size_t k = 0; k < act.size(); ++k) A.row(static_cast<Eigen::Index>(k)) = P.A.row(act[k]);
    T.pieces.push_back(ConvexPolyhedron::cone(A, P.E));
  }
  if (T.pieces.empty()) fail(ErrorCode::PointNotInSet, "tangent_cone: point is not in the set");
  return T;
}

DistanceResult distance_inf(const ConvexPolyhedron& P, const Vec& z, const Tolerance& tol) {
  require_dims(z.size() == P.dim, "distance_inf: point dimension");
  const Eigen::Index n = P.dim;
  LpProblem lp = piece_lp(P, 1);
  lp.sense = Sense::Min;
  lp.c(n) = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec r = Vec::Zero(n + 1);
    r(k) = 1.0;
    r(n) = -1.0;
    add_ineq(lp, r, z(k));
    r(k) = -1.0;
    add_ineq(lp, r, -z(k));
  }
  DistanceResult out;
  const LpOutcome o = solve_lp(lp, tol);
  if (!o.optimal()) return out;
  out.value = std::max(0.0, o.value);
  out.nearest = o.x.head(n);
  out.piece = 0;
  return out;
}

DistanceResult distance_inf(const PolyhedralSet& S, const Vec& z, const Tolerance& tol) {
  DistanceResult best;
  for (std::size_t i = 0; i < S.pieces.size(); ++i) {
    DistanceResult d = distance_inf(S.pieces[i], z, tol);
    if (d.empty()) continue;
    if (best.empty() || d.value < best.value) {
      best = d;
      best.piece = static_cast<Eigen::Index>(i);
    }
  }
  return best;
}

namespace {

// Relative-interior point of {x in P : rows in `eq_rows` tight, rows in
// `strict` strictly satisfied, extra eqs/strict hyperplanes}. Returns nullopt
// if the region is empty.
struct Region {
  std::vector<Vec> eq_a;
  std::vector<double> eq_b;
  std::vector<Vec> lt_a;  // a x < b
  std::vector<double> lt_b;
};

std::optional<Vec> interior_point(const ConvexPolyhedron& P, const Region& R, bool box,
                                  const Tolerance& tol) {
  const Eigen::Index n = P.dim;
  LpProblem lp = LpProblem::feasibility(n + 1);
  lp.A_ineq = Mat(0, n + 1);
  lp.b_ineq = Vec(0);
  lp.A_eq = Mat(0, n + 1);
  lp.b_eq = Vec(0);
  lp.c(n) = 1.0;
  for (Eigen::Index k = 0; k < P.num_eq(); ++k) add_eq(lp, padded(P.E.row(k).transpose(), n + 1), P.f(k));
  for (std::size_t k = 0; k < R.eq_a.size(); ++k) add_eq(lp, padded(R.eq_a[k], n + 1), R.eq_b[k]);
  for (std::size_t k = 0; k < R.lt_a.size(); ++k) {
    Vec r = padded(R.lt_a[k], n + 1);
    r(n) = std::max(1e-12, R.lt_a[k].norm());
    add_ineq(lp, r, R.lt_b[k]);
  }
  Vec cap = Vec::Zero(n + 1);
  cap(n) = 1.0;
  add_ineq(lp, cap, 1.0);
  if (box) {
    for (Eigen::Index k = 0; k < n; ++k) {
      Vec r = Vec::Zero(n + 1);
      r(k) = 1.0;
      add_ineq(lp, r, 1.0);
      r(k) = -1.0;
      add_ineq(lp, r, 1.0);
    }
  }
  const LpOutcome o = solve_lp(lp, tol);
  if (!o.optimal()) return std::nullopt;
  if (!R.lt_a.empty() && o.value <= tol.eps_feas) return std::nullopt;
  return Vec(o.x.head(n));
}

// Rows of P tight on the whole face {x in P : A_I x = b_I}; nullopt if empty.
std::optional<std::vector<Eigen::Index>> face_closure(const ConvexPolyhedron& P,
                                                       const std::vector<Eigen::Index>& I,
                                                       const Tolerance& tol) {
  const Eigen::Index n = P.dim;
  const Eigen::Index m = P.num_ineq();
  std::vector<int> state(static_cast<std::size_t>(m), 0);  // 0 unknown, 1 tight, 2 loose
  for (Eigen::Index i : I) state[i] = 1;
  while (true) {
    std::vector<Eigen::Index> unknown;
    for (Eigen::Index i = 0; i < m; ++i)
      if (state[i] == 0) unknown.push_back(i);
    const Eigen::Index u = static_cast<Eigen::Index>(unknown.size());
    // max sum s_j, a_j x + s_j <= b_j, 0 <= s_j <= 1 over unknown rows.
    LpProblem lp = piece_lp(P, u);
    for (Eigen::Index i = 0; i < m; ++i)
      if (state[i] == 1) add_eq(lp, padded(P.A.row(i).transpose(), n + u), P.b(i));
    for (Eigen::Index k = 0; k < u; ++k) {
      lp.A_ineq(unknown[k], n + k) = 1.0;
      lp.c(n + k) = 1.0;
      Vec r = Vec::Zero(n + u);
      r(n + k) = 1.0;
      add_ineq(lp, r, 1.0);
      r(n + k) = -1.0;
      add_ineq(lp, r, 0.0);
    }
    const LpOutcome o = solve_lp(lp, tol);
    if (o.infeasible()) return std::nullopt;
    if (!o.optimal()) fail(ErrorCode::InvalidArgument, "face closure LP unbounded");
    bool progressed = false;
    for (Eigen::Index k = 0; k < u; ++k) {
      if (o.x(n + k) > tol.eps_feas) {
        state[unknown[k]] = 2;
        progressed = true;
      }
    }
    if (!progressed) {
      for (Eigen::Index k = 0; k < u; ++k) state[unknown[k]] = 1;
      break;
    }
  }
  std::vector<Eigen::Index> closed;
  for (Eigen::Index i = 0; i < m; ++i)
    if (state[i] == 1) closed.push_back(i);
  return closed;
}

Region face_region(const ConvexPolyhedron& P, const std::vector<Eigen::Index>& active) {
  Region R;
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < P.num_ineq(); ++i) {
    if (k < active.size() && active[k] == i) {
      R.eq_a.push_back(P.A.row(i).transpose());
      R.eq_b.push_back(P.b(i));
      ++k;
    } else {
      R.lt_a.push_back(P.A.row(i).transpose());
      R.lt_b.push_back(P.b(i));
    }
  }
  return R;
}

Mat equality_rows(const ConvexPolyhedron& P, const Region& R) {
  Mat M = P.E;
  for (const Vec& a : R.eq_a) M = linalg::vstack(M, Mat(a.transpose()));
  return M;
}

}  // namespace

std::vector<Face> faces(const ConvexPolyhedron& P, const Tolerance& tol) {
  if (P.num_ineq() > kFaceMaxRows)
    fail(ErrorCode::ScaleCapExceeded, "faces: more than 20 inequality rows");
  const auto root = face_closure(P, {}, tol);
  if (!root) fail(ErrorCode::EmptySet, "faces: empty polyhedron");
  const bool box = P.is_cone();

  std::set<std::vector<Eigen::Index>> seen{*root};
  std::set<std::vector<Eigen::Index>> tried;
  std::vector<std::vector<Eigen::Index>> queue{*root};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto cur = queue[q];
    for (Eigen::Index j = 0; j < P.num_ineq(); ++j) {
      if (std::binary_search(cur.begin(), cur.end(), j)) continue;
      auto next = cur;
      next.insert(std::upper_bound(next.begin(), next.end(), j), j);
      if (!tried.insert(next).second) continue;
      const auto cl = face_closure(P, next, tol);
      if (cl && seen.insert(*cl).second) queue.push_back(*cl);
    }
  }

  std::vector<Face> out;
  for (const auto& act : seen) {
    const auto rep = interior_point(P, face_region(P, act), box, tol);
    if (!rep) fail(ErrorCode::InvalidArgument, "faces: no relative interior point found");
    out.push_back(Face{0, act, *rep});
  }
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    if (a.active.size() != b.active.size()) return a.active.size() < b.active.size();
    return a.active < b.active;
  });
  return out;
}

std::vector<Cell> cells(const PolyhedralSet& S, const Tolerance& tol) {
  struct Hyper {
    Vec a;
    double b;
    Eigen::Index piece;
  };
  std::vector<Hyper> hypers;
  auto add_hyper = [&](Vec a, double b, Eigen::Index piece) {
    const double s = linalg::inf_norm(a);
    if (s <= tol.eps_zero) return;
    a /= s;
    b /= s;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      if (std::abs(a(k)) > 1e-12) {
        if (a(k) < 0) a = -a, b = -b;
        break;
      }
    }
    for (const auto& h : hypers)
      if (linalg::near(h.a, a, 1e-12) && std::abs(h.b - b) <= 1e-12 && h.piece == piece) return;
    hypers.push_back({a, b, piece});
  };
  for (std::size_t j = 0; j < S.pieces.size(); ++j) {
    const auto& P = S.pieces[j];
    for (Eigen::Index i = 0; i < P.num_ineq(); ++i) add_hyper(P.A.row(i).transpose(), P.b(i), static_cast<Eigen::Index>(j));
    for (Eigen::Index i = 0; i < P.num_eq(); ++i) add_hyper(P.E.row(i).transpose(), P.f(i), static_cast<Eigen::Index>(j));
  }

  std::vector<Cell> out;
  for (std::size_t pi = 0; pi < S.pieces.size(); ++pi) {
    const auto& P = S.pieces[pi];
    if (!is_nonempty(P, tol)) continue;
    const bool box = P.is_cone();
    std::vector<const Hyper*> others;
    for (const auto& h : hypers) {
      if (h.piece == static_cast<Eigen::Index>(pi)) continue;
      bool dup = false;
      for (const Hyper* o : others)
        if (linalg::near(o->a, h.a, 1e-12) && std::abs(o->b - h.b) <= 1e-12) dup = true;
      if (!dup) others.push_back(&h);
    }

    for (const Face& F : faces(P, tol)) {
      std::function<void(std::size_t, Region&, const Vec&)> rec = [&](std::size_t k, Region& R,
                                                                      const Vec& x) {
        const Mat Eq = equality_rows(P, R);
        if (k == others.size()) {
          Cell c;
          c.parent = static_cast<Eigen::Index>(pi);
          c.active = active_rows(P, x, tol);
          c.rep_point = x;
          c.affine_dirs = linalg::null_space(Eq.rows() ? Eq : Mat(0, P.dim), tol.eps_zero);
          out.push_back(std::move(c));
          return;
        }
        const Hyper& h = *others[k];
        // Constant on the current affine hull: sign is fixed.
        if (Eq.rows() && linalg::rank(linalg::vstack(Eq, Mat(h.a.transpose()))) == linalg::rank(Eq)) {
          rec(k + 1, R, x);
          return;
        }
        for (int sgn : {-1, 0, 1}) {
          if (sgn == 0) {
            R.eq_a.push_back(h.a);
            R.eq_b.push_back(h.b);
          } else {
            R.lt_a.push_back(sgn < 0 ? Vec(h.a) : Vec(-h.a));
            R.lt_b.push_back(sgn < 0 ? h.b : -h.b);
          }
          if (auto y = interior_point(P, R, box, tol)) rec(k + 1, R, *y);
          if (sgn == 0) {
            R.eq_a.pop_back();
            R.eq_b.pop_back();
          } else {
            R.lt_a.pop_back();
            R.lt_b.pop_back();
          }
        }
      };
      Region R = face_region(P, F.active);
      rec(0, R, F.rep_point);
    }
  }
  return out;
}

GeneratorRep generators(const ConvexPolyhedron& K, const Tolerance& tol) {
  if (!K.is_cone()) fail(ErrorCode::InvalidArgument, "generators: piece is not a cone");
  return dd_h_to_v(K.A, K.E, tol);
}

ConvexPolyhedron from_hrep(const HRep& h, Eigen::Index n) {
  Mat A = h.A.rows() ? h.A : Mat(0, n);
  Mat E = h.E.rows() ? h.E : Mat(0, n);
  return ConvexPolyhedron::cone(A, E);
}

ConvexPolyhedron polar(const PolyhedralCone& K, const Tolerance& tol) {
  if (!K.is_cone()) fail(ErrorCode::InvalidArgument, "polar: set is not a cone");
  const Eigen::Index n = K.dim;
  std::vector<Vec> ineq, eq;
  for (const auto& P : K.pieces) {
    GeneratorRep g;
    g.dim = n;
    g.rays = linalg::rows_of(P.A);
    g.lines = linalg::rows_of(P.E);
    const HRep h = dd_v_to_h(g, tol);
    for (const Vec& r : linalg::rows_of(h.A)) ineq.push_back(r);
    for (const Vec& r : linalg::rows_of(h.E)) eq.push_back(r);
  }
  // Keep the equality block as an orthonormal row basis and drop duplicate rows.
  Mat E = linalg::rows_to_matrix(eq, n);
  if (E.rows()) E = linalg::column_span(E.transpose(), tol.eps_zero).transpose();
  std::vector<Vec> uniq;
  for (const Vec& r : ineq) {
    bool dup = false;
    for (const Vec& u : uniq)
      if (linalg::near(u, r, 1e-12)) dup = true;
    if (!dup) uniq.push_back(r);
  }
  return ConvexPolyhedron::cone(linalg::rows_to_matrix(uniq, n), E.rows() ? E : Mat(0, n));
}

Mat lineality_space(const ConvexPolyhedron& K, const Tolerance& tol) {
  return linalg::null_space(linalg::vstack(K.A, K.E), tol.eps_zero);
}

ConvexPolyhedron intersect(const ConvexPolyhedron& P, const ConvexPolyhedron& Q) {
  require_dims(P.dim == Q.dim, "intersect: dimension");
  Vec b(P.b.size() + Q.b.size());
  b << P.b, Q.b;
  Vec f(P.f.size() + Q.f.size());
  f << P.f, Q.f;
  ConvexPolyhedron out(linalg::vstack({&P.A, &Q.A}, P.dim), b, linalg::vstack({&P.E, &Q.E}, P.dim), f);
  out.dim = P.dim;
  return out;
}

}  // namespace djopt
