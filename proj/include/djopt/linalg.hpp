#pragma once

// Dense linear algebra helpers shared by every module. All matrices are dense
// Eigen types; the target dimensions are tiny.

#include <Eigen/Dense>
#include <vector>

namespace djopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Tolerance {
  double eps_feas = 1e-8;
  double eps_zero = 1e-10;
  double eps_opt = 1e-8;

  // Throws InvalidArgument unless all fields are positive and eps_zero <= eps_feas.
  void validate() const;
};

inline const Tolerance& default_tolerance() {
  static const Tolerance tol{};
  return tol;
}

namespace linalg {

Mat empty_rows(Eigen::Index cols);

// Stacks row blocks with a common column count.
Mat vstack(const std::vector<const Mat*>& blocks, Eigen::Index cols);
Mat vstack(const Mat& top, const Mat& bottom);

// Orthonormal basis (as columns) of {x : M x = 0}.
Mat null_space(const Mat& m, double eps_zero = 1e-10);

// Orthonormal basis (as columns) of the column span of M.
Mat column_span(const Mat& m, double eps_zero = 1e-10);

// Orthonormal basis of the orthogonal complement of span(basis columns) in R^n.
Mat orthogonal_complement(const Mat& basis, Eigen::Index n,
                          double eps_zero = 1e-10);

// Numerical rank with a relative threshold.
Eigen::Index rank(const Mat& m, double eps_zero = 1e-10);

// Rows of `m` as a list of column vectors.
std::vector<Vec> rows_of(const Mat& m);
Mat rows_to_matrix(const std::vector<Vec>& rows, Eigen::Index cols);
Mat cols_to_matrix(const std::vector<Vec>& cols, Eigen::Index rows);

double inf_norm(const Vec& v);

// Scales v so its max-norm is 1 (zero vectors are returned unchanged).
Vec normalized_inf(const Vec& v);

// True if a and b agree componentwise within tol.
bool near(const Vec& a, const Vec& b, double tol);

}  // namespace linalg
}  // namespace djopt
