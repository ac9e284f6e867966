#include "djopt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "djopt/error.hpp"

namespace djopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PointNotInSet: return "PointNotInSet";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ScaleCapExceeded: return "ScaleCapExceeded";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MissingKappa: return "MissingKappa";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::InfiniteArithmetic: return "InfiniteArithmetic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (!(eps_feas > 0 && eps_zero > 0 && eps_opt > 0))
    fail(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  if (eps_zero > eps_feas)
    fail(ErrorCode::InvalidArgument, "eps_zero must not exceed eps_feas");
}

namespace linalg {

Mat empty_rows(Eigen::Index cols) { return Mat(0, cols); }

Mat vstack(const std::vector<const Mat*>& blocks, Eigen::Index cols) {
  Eigen::Index rows = 0;
  for (const Mat* b : blocks) {
    require_dims(b->cols() == cols || b->rows() == 0, "vstack column count");
    rows += b->rows();
  }
  Mat out(rows, cols);
  Eigen::Index r = 0;
  for (const Mat* b : blocks) {
    if (b->rows() == 0) continue;
    out.middleRows(r, b->rows()) = *b;
    r += b->rows();
  }
  return out;
}

Mat vstack(const Mat& top, const Mat& bottom) {
  const Eigen::Index cols = top.rows() > 0 ? top.cols() : bottom.cols();
  return vstack({&top, &bottom}, cols);
}

namespace {

// Threshold relative to the largest singular value, with an absolute floor so
// that an all-zero matrix has rank 0.
double sv_threshold(const Eigen::VectorXd& sv, double eps_zero) {
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  return std::max(eps_zero, eps_zero * smax) * 10.0;
}

}  // namespace

Mat null_space(const Mat& m, double eps_zero) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = sv_threshold(sv, eps_zero);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat column_span(const Mat& m, double eps_zero) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double thr = sv_threshold(sv, eps_zero);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return svd.matrixU().leftCols(r);
}

Mat orthogonal_complement(const Mat& basis, Eigen::Index n, double eps_zero) {
  if (basis.cols() == 0) return Mat::Identity(n, n);
  return null_space(basis.transpose(), eps_zero);
}

Eigen::Index rank(const Mat& m, double eps_zero) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  const double thr = sv_threshold(sv, eps_zero);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return r;
}

std::vector<Vec> rows_of(const Mat& m) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

Mat rows_to_matrix(const std::vector<Vec>& rows, Eigen::Index cols) {
  Mat out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_dims(rows[i].size() == cols, "rows_to_matrix");
    out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return out;
}

Mat cols_to_matrix(const std::vector<Vec>& cols, Eigen::Index rows) {
  Mat out(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    require_dims(cols[i].size() == rows, "cols_to_matrix");
    out.col(static_cast<Eigen::Index>(i)) = cols[i];
  }
  return out;
}

double inf_norm(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Vec normalized_inf(const Vec& v) {
  const double s = inf_norm(v);
  return s > 0 ? Vec(v / s) : v;
}

bool near(const Vec& a, const Vec& b, double tol) {
  if (a.size() != b.size()) return false;
  return a.size() == 0 || (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace linalg
}  // namespace djopt
