#include "djopt/dd.hpp"

#include <algorithm>
#include <cmath>

#include "djopt/error.hpp"
#include "djopt/lp.hpp"

namespace djopt {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i) - b(i)) > 1e-12) return a(i) < b(i);
  }
  return false;
}

void sort_unique(std::vector<Vec>& vs, double tol) {
  std::sort(vs.begin(), vs.end(), lex_less);
  std::vector<Vec> out;
  for (auto& v : vs) {
    bool dup = false;
    for (const auto& u : out)
      if (linalg::near(u, v, tol)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(v));
  }
  vs = std::move(out);
}

// Canonical sign for a line: first significant entry positive.
Vec canonical_line(Vec v, double tol) {
  v = linalg::normalized_inf(v);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

// Extreme rays of the pointed cone {y : B y <= 0} in R^k (rank B = k).
std::vector<Vec> pointed_rays(const Mat& B, double tol) {
  const Eigen::Index k = B.cols();
  const Eigen::Index m = B.rows();
  std::vector<Vec> rays;
  if (k == 0) return rays;

  // Greedy choice of k independent rows for the initial simplicial cone.
  std::vector<Eigen::Index> chosen;
  Mat acc(0, k);
  for (Eigen::Index i = 0; i < m && static_cast<Eigen::Index>(chosen.size()) < k; ++i) {
    Mat trial = linalg::vstack(acc, Mat(B.row(i)));
    if (linalg::rank(trial) > acc.rows()) {
      acc = trial;
      chosen.push_back(i);
    }
  }
  require_dims(static_cast<Eigen::Index>(chosen.size()) == k, "dd: cone not pointed after reduction");

  const Mat inv = acc.fullPivLu().inverse();
  for (Eigen::Index j = 0; j < k; ++j) rays.push_back(linalg::normalized_inf(-inv.col(j)));

  std::vector<Eigen::Index> processed = chosen;
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (Eigen::Index i : chosen) used[i] = true;

  for (Eigen::Index i = 0; i < m; ++i) {
    if (used[i]) continue;
    const Vec a = B.row(i).transpose();
    const double an = std::max(1.0, linalg::inf_norm(a));
    std::vector<Vec> pos, neg, zero;
    for (const Vec& r : rays) {
      const double s = a.dot(r);
      if (s > tol * an) pos.push_back(r);
      else if (s < -tol * an) neg.push_back(r);
      else zero.push_back(r);
    }
    std::vector<Vec> next = zero;
    next.insert(next.end(), neg.begin(), neg.end());
    for (const Vec& p : pos) {
      for (const Vec& q : neg) {
        // Adjacency: common active processed rows have rank k - 2.
        std::vector<Vec> common;
        for (Eigen::Index r : processed) {
          const Vec br = B.row(r).transpose();
          const double bn = std::max(1.0, linalg::inf_norm(br));
          if (std::abs(br.dot(p)) <= tol * bn && std::abs(br.dot(q)) <= tol * bn)
            common.push_back(br);
        }
        if (static_cast<Eigen::Index>(common.size()) < k - 2) continue;
        if (k > 2 && linalg::rank(linalg::rows_to_matrix(common, k)) != k - 2) continue;
        const Vec nr = a.dot(p) * q - a.dot(q) * p;
        if (linalg::inf_norm(nr) <= tol) continue;
        next.push_back(linalg::normalized_inf(nr));
      }
    }
    sort_unique(next, tol * 100);
    rays = std::move(next);
    processed.push_back(i);
    used[i] = true;
  }
  return rays;
}

}  // namespace

GeneratorRep dd_h_to_v(const Mat& A, const Mat& E, const Tolerance& tol) {
  const Eigen::Index n = A.rows() > 0 ? A.cols() : E.cols();
  require_dims(A.rows() == 0 || E.rows() == 0 || A.cols() == E.cols(), "dd_h_to_v column counts");
  if (n > kDdMaxDim || A.rows() + E.rows() > kDdMaxRows)
    fail(ErrorCode::ScaleCapExceeded, "double description limited to dimension 12 and 64 rows");

  GeneratorRep g;
  g.dim = n;
  const Mat AE = linalg::vstack(A, E);
  const Mat L = linalg::null_space(AE, tol.eps_zero);
  for (Eigen::Index j = 0; j < L.cols(); ++j) g.lines.push_back(canonical_line(L.col(j), 1e-9));

  // Pointed part: coordinates in null(E) ∩ L^perp.
  const Mat ELt = linalg::vstack(E, Mat(L.transpose()));
  const Mat Q = linalg::null_space(ELt.rows() ? ELt : Mat(0, n), tol.eps_zero);
  if (Q.cols() == 0) return g;
  if (A.rows() == 0) return g;  // then Q is empty by construction
  const Mat B = A * Q;
  std::vector<Vec> ys = pointed_rays(B, 1e-9);
  for (const Vec& y : ys) g.rays.push_back(linalg::normalized_inf(Q * y));
  sort_unique(g.rays, 1e-8);
  return g;
}

HRep dd_v_to_h(const GeneratorRep& g, const Tolerance& tol) {
  const Eigen::Index n = g.dim;
  const Mat R = linalg::rows_to_matrix(g.rays, n);
  const Mat L = linalg::rows_to_matrix(g.lines, n);
  const GeneratorRep polar = dd_h_to_v(R, L, tol);
  HRep h;
  h.A = linalg::rows_to_matrix(polar.rays, n);
  h.E = linalg::rows_to_matrix(polar.lines, n);
  return h;
}

Mat ray_matrix(const GeneratorRep& g) { return linalg::cols_to_matrix(g.rays, g.dim); }
Mat line_matrix(const GeneratorRep& g) { return linalg::cols_to_matrix(g.lines, g.dim); }

bool generated_contains(const GeneratorRep& g, const Vec& v, const Tolerance& tol) {
  require_dims(v.size() == g.dim, "generated_contains dimension");
  const double s = linalg::inf_norm(v);
  if (s == 0) return true;
  const Vec vn = v / s;
  const Eigen::Index nr = static_cast<Eigen::Index>(g.rays.size());
  const Eigen::Index nl = static_cast<Eigen::Index>(g.lines.size());
  if (nr + nl == 0) return false;
  LpProblem p = LpProblem::feasibility(nr + nl);
  p.A_eq = Mat(g.dim, nr + nl);
  if (nr) p.A_eq.leftCols(nr) = ray_matrix(g);
  if (nl) p.A_eq.rightCols(nl) = line_matrix(g);
  p.b_eq = vn;
  p.A_ineq = Mat::Zero(nr, nr + nl);
  p.A_ineq.leftCols(nr) = -Mat::Identity(nr, nr);
  p.b_ineq = Vec::Zero(nr);
  return solve_lp(p, tol).optimal();
}

}  // namespace djopt
