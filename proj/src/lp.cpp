#include "djopt/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "djopt/error.hpp"

namespace djopt {

void LpProblem::validate() const {
  const Eigen::Index n = c.size();
  require_dims(A_ineq.rows() == b_ineq.size(), "A_ineq rows vs b_ineq length");
  require_dims(A_eq.rows() == b_eq.size(), "A_eq rows vs b_eq length");
  require_dims(A_ineq.rows() == 0 || A_ineq.cols() == n, "A_ineq columns vs c length");
  require_dims(A_eq.rows() == 0 || A_eq.cols() == n, "A_eq columns vs c length");
}

LpProblem LpProblem::feasibility(Eigen::Index n) {
  LpProblem p;
  p.c = Vec::Zero(n);
  p.A_ineq = Mat(0, n);
  p.b_ineq = Vec(0);
  p.A_eq = Mat(0, n);
  p.b_eq = Vec(0);
  return p;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

namespace {

constexpr long kMaxIterations = 200000;

// Standard-form tableau: columns are x+ (n), x- (n), slacks (mi), artificials
// (one per row that needs one). Every row is scaled by sigma_r in {+1,-1} so
// that its right-hand side is nonnegative.
struct Tableau {
  Eigen::Index n = 0, mi = 0, me = 0, rows = 0, ncols = 0, nart = 0;
  Mat T;                           // rows x (ncols + 1); last column = rhs
  std::vector<Eigen::Index> basis;  // basic column per row
  std::vector<double> sigma;
  std::vector<bool> is_art;        // per column
  Mat M0;                          // original standard-form matrix (rows x ncols)

  double& rhs(Eigen::Index r) { return T(r, ncols); }
};

Tableau build(const LpProblem& p) {
  Tableau t;
  t.n = p.num_vars();
  t.mi = p.A_ineq.rows();
  t.me = p.A_eq.rows();
  t.rows = t.mi + t.me;
  const Eigen::Index base = 2 * t.n + t.mi;

  t.sigma.assign(static_cast<std::size_t>(t.rows), 1.0);
  std::vector<bool> need_art(static_cast<std::size_t>(t.rows), true);
  for (Eigen::Index r = 0; r < t.rows; ++r) {
    const double rhs = r < t.mi ? p.b_ineq(r) : p.b_eq(r - t.mi);
    if (rhs < 0) t.sigma[r] = -1.0;
    if (r < t.mi && t.sigma[r] > 0) need_art[r] = false;
  }
  for (bool b : need_art) t.nart += b ? 1 : 0;
  t.ncols = base + t.nart;
  t.T = Mat::Zero(t.rows, t.ncols + 1);
  t.is_art.assign(static_cast<std::size_t>(t.ncols), false);
  t.basis.assign(static_cast<std::size_t>(t.rows), -1);

  Eigen::Index art = base;
  for (Eigen::Index r = 0; r < t.rows; ++r) {
    const double s = t.sigma[r];
    if (r < t.mi) {
      t.T.block(r, 0, 1, t.n) = s * p.A_ineq.row(r);
      t.T.block(r, t.n, 1, t.n) = -s * p.A_ineq.row(r);
      t.T(r, 2 * t.n + r) = s;
      t.rhs(r) = s * p.b_ineq(r);
    } else {
      const Eigen::Index e = r - t.mi;
      t.T.block(r, 0, 1, t.n) = s * p.A_eq.row(e);
      t.T.block(r, t.n, 1, t.n) = -s * p.A_eq.row(e);
      t.rhs(r) = s * p.b_eq(e);
    }
    if (need_art[r]) {
      t.T(r, art) = 1.0;
      t.is_art[art] = true;
      t.basis[r] = art++;
    } else {
      t.basis[r] = 2 * t.n + r;
    }
  }
  t.M0 = t.T.leftCols(t.ncols);
  return t;
}

void pivot(Tableau& t, Eigen::Index r, Eigen::Index j) {
  t.T.row(r) /= t.T(r, j);
  for (Eigen::Index i = 0; i < t.rows; ++i) {
    if (i == r) continue;
    const double f = t.T(i, j);
    if (f != 0.0) t.T.row(i) -= f * t.T.row(r);
  }
  t.T(r, j) = 1.0;
  t.basis[r] = j;
}

// Basis matrix from the original columns.
Mat basis_matrix(const Tableau& t) {
  Mat B(t.rows, t.rows);
  for (Eigen::Index r = 0; r < t.rows; ++r) B.col(r) = t.M0.col(t.basis[r]);
  return B;
}

// Simplex duals pi with B^T pi = c_B.
Vec simplex_duals(const Tableau& t, const Vec& cost) {
  if (t.rows == 0) return Vec(0);
  Vec cb(t.rows);
  for (Eigen::Index r = 0; r < t.rows; ++r) cb(r) = cost(t.basis[r]);
  return basis_matrix(t).transpose().fullPivLu().solve(cb);
}

enum class Phase { Optimal, Unbounded };

struct PhaseResult {
  Phase phase;
  Eigen::Index entering = -1;
};

// Minimizes cost^T y over the tableau with Bland's rule. Artificial columns
// never enter when `block_art` is set.
PhaseResult run_simplex(Tableau& t, const Vec& cost, bool block_art, double rc_tol,
                        double piv_tol) {
  for (long it = 0; it < kMaxIterations; ++it) {
    Vec cb(t.rows);
    for (Eigen::Index r = 0; r < t.rows; ++r) cb(r) = cost(t.basis[r]);
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < t.ncols; ++j) {
      if (block_art && t.is_art[j]) continue;
      double d = cost(j);
      for (Eigen::Index r = 0; r < t.rows; ++r) d -= cb(r) * t.T(r, j);
      if (d < -rc_tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return {Phase::Optimal, -1};

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < t.rows; ++r) {
      const double a = t.T(r, enter);
      if (a <= piv_tol) continue;
      const double ratio = std::max(0.0, t.T(r, t.ncols)) / a;
      if (ratio < best - 1e-12 ||
          (std::abs(ratio - best) <= 1e-12 && t.basis[r] < t.basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) return {Phase::Unbounded, enter};
    pivot(t, leave, enter);
  }
  fail(ErrorCode::InvalidArgument, "simplex iteration limit reached");
}

Vec primal_x(const Tableau& t) {
  Vec y = Vec::Zero(t.ncols);
  for (Eigen::Index r = 0; r < t.rows; ++r) y(t.basis[r]) = t.T(r, t.ncols);
  return y.head(t.n) - y.segment(t.n, t.n);
}

}  // namespace

LpOutcome solve_lp(const LpProblem& p, const Tolerance& tol) {
  p.validate();
  tol.validate();
  const double rc_tol = tol.eps_opt * 0.1;
  const double piv_tol = tol.eps_zero * 10.0;

  Tableau t = build(p);
  LpOutcome out;

  // Phase 1: minimize the sum of artificials.
  if (t.nart > 0) {
    Vec c1 = Vec::Zero(t.ncols);
    for (Eigen::Index j = 0; j < t.ncols; ++j)
      if (t.is_art[j]) c1(j) = 1.0;
    run_simplex(t, c1, false, rc_tol, piv_tol);
    double infeas = 0.0;
    for (Eigen::Index r = 0; r < t.rows; ++r)
      if (t.is_art[t.basis[r]]) infeas += t.T(r, t.ncols);
    if (infeas > tol.eps_feas) {
      const Vec pi = simplex_duals(t, c1);
      Vec w(t.rows);
      for (Eigen::Index r = 0; r < t.rows; ++r) w(r) = -t.sigma[r] * pi(r);
      for (Eigen::Index r = 0; r < t.mi; ++r) w(r) = std::max(0.0, w(r));
      out.status = LpStatus::Infeasible;
      out.farkas = linalg::normalized_inf(w);
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index r = 0; r < t.rows; ++r) {
      if (!t.is_art[t.basis[r]]) continue;
      Eigen::Index best = -1;
      for (Eigen::Index j = 0; j < t.ncols; ++j) {
        if (t.is_art[j]) continue;
        if (std::abs(t.T(r, j)) > piv_tol &&
            (best < 0 || std::abs(t.T(r, j)) > std::abs(t.T(r, best)) * 1.5))
          best = j;
      }
      if (best >= 0) pivot(t, r, best);
    }
  }

  // Phase 2 in minimization form.
  Vec c2 = Vec::Zero(t.ncols);
  const double sgn = p.sense == Sense::Max ? -1.0 : 1.0;
  c2.head(t.n) = sgn * p.c;
  c2.segment(t.n, t.n) = -sgn * p.c;
  const PhaseResult res = run_simplex(t, c2, true, rc_tol, piv_tol);

  if (res.phase == Phase::Unbounded) {
    Vec d = Vec::Zero(t.ncols);
    d(res.entering) = 1.0;
    for (Eigen::Index r = 0; r < t.rows; ++r) d(t.basis[r]) = -t.T(r, res.entering);
    Vec ray = d.head(t.n) - d.segment(t.n, t.n);
    out.status = LpStatus::Unbounded;
    out.ray = linalg::normalized_inf(ray);
    out.x = primal_x(t);
    return out;
  }

  out.status = LpStatus::Optimal;
  out.x = primal_x(t);
  out.value = p.c.dot(out.x);
  const Vec pi = simplex_duals(t, c2);
  out.dual_ineq = Vec::Zero(t.mi);
  out.dual_eq = Vec::Zero(t.me);
  for (Eigen::Index r = 0; r < t.mi; ++r) {
    const double v = -t.sigma[r] * pi(r);
    out.dual_ineq(r) = std::abs(v) <= tol.eps_zero ? 0.0 : std::max(0.0, v);
  }
  for (Eigen::Index r = 0; r < t.me; ++r) out.dual_eq(r) = -t.sigma[t.mi + r] * pi(t.mi + r);
  return out;
}

std::string check_certificate(const LpProblem& p, const LpOutcome& out, const Tolerance& tol) {
  std::ostringstream err;
  const double scale = 1.0 + std::max({linalg::inf_norm(p.c), linalg::inf_norm(p.b_ineq),
                                       linalg::inf_norm(p.b_eq)});
  const double feas = tol.eps_feas * scale * 10;
  auto ineq_slack = [&](const Vec& x) { return Vec(p.b_ineq - p.A_ineq * x); };

  switch (out.status) {
    case LpStatus::Optimal: {
      if (p.A_ineq.rows() && ineq_slack(out.x).minCoeff() < -feas) err << "primal inequality violated";
      else if (p.A_eq.rows() && linalg::inf_norm(p.A_eq * out.x - p.b_eq) > feas)
        err << "primal equality violated";
      else if (out.dual_ineq.size() && out.dual_ineq.minCoeff() < -feas) err << "negative dual";
      else {
        const double sgn = p.sense == Sense::Max ? 1.0 : -1.0;
        Vec r = sgn * p.c;
        if (p.A_ineq.rows()) r -= p.A_ineq.transpose() * out.dual_ineq;
        if (p.A_eq.rows()) r -= p.A_eq.transpose() * out.dual_eq;
        double dv = 0.0;
        if (p.A_ineq.rows()) dv += p.b_ineq.dot(out.dual_ineq);
        if (p.A_eq.rows()) dv += p.b_eq.dot(out.dual_eq);
        if (linalg::inf_norm(r) > feas) err << "dual infeasible";
        else if (std::abs(sgn * out.value - dv) > tol.eps_opt * scale * 10) err << "duality gap";
        else if (p.A_ineq.rows()) {
          const Vec s = ineq_slack(out.x);
          for (Eigen::Index i = 0; i < s.size(); ++i)
            if (std::abs(s(i) * out.dual_ineq(i)) > tol.eps_opt * scale * 10) {
              err << "complementary slackness row " << i;
              break;
            }
        }
      }
      break;
    }
    case LpStatus::Unbounded: {
      const Vec& d = out.ray;
      if (linalg::inf_norm(d) == 0) err << "zero ray";
      else if (p.A_ineq.rows() && (p.A_ineq * d).maxCoeff() > feas) err << "ray leaves inequalities";
      else if (p.A_eq.rows() && linalg::inf_norm(p.A_eq * d) > feas) err << "ray leaves equalities";
      else {
        const double gain = p.c.dot(d) * (p.sense == Sense::Max ? 1.0 : -1.0);
        if (gain <= tol.eps_zero) err << "ray does not improve objective";
      }
      break;
    }
    case LpStatus::Infeasible: {
      const Eigen::Index mi = p.A_ineq.rows();
      const Vec& f = out.farkas;
      if (f.size() != mi + p.A_eq.rows()) {
        err << "farkas length";
        break;
      }
      const Vec y = f.head(mi), z = f.tail(p.A_eq.rows());
      Vec comb = Vec::Zero(p.num_vars());
      if (mi) comb += p.A_ineq.transpose() * y;
      if (p.A_eq.rows()) comb += p.A_eq.transpose() * z;
      double rhs = 0.0;
      if (mi) rhs += p.b_ineq.dot(y);
      if (p.A_eq.rows()) rhs += p.b_eq.dot(z);
      if (mi && y.minCoeff() < -feas) err << "farkas y negative";
      else if (linalg::inf_norm(comb) > feas) err << "farkas combination nonzero";
      else if (rhs >= -tol.eps_feas) err << "farkas rhs not negative";
      break;
    }
  }
  return err.str();
}

}  // namespace djopt
