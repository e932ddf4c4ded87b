#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dmfaw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a = left * diag(singulars) * right^T, left n x k, right k x k.
struct EconSvd {
  Matrix left;
  Vector singulars;
  Matrix right;
};

EconSvd econ_svd(const Matrix& a);

// Moore-Penrose pseudo-inverse; singular values below
// max(rows, cols) * eps * sigma_max are dropped.
Matrix pinv(const Matrix& a);

Matrix pos_part(const Matrix& a);
Matrix neg_part(const Matrix& a);

// Row-orthonormal G (k x n) maximizing trace(G * u) for u n x k.
Matrix max_trace_orthogonal(const Matrix& u);

double frob_sq(const Matrix& a);
// sum_i sum_j (w_i * a_ij)^2
double weighted_resid_sq(const Vector& w, const Matrix& a);

void require_finite(const Matrix& a, const std::string& what);

}  // namespace dmfaw
