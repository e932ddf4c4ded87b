#include "dmfaw/linalg.hpp"

#include <algorithm>
#include <limits>

namespace dmfaw {

void require_finite(const Matrix& a, const std::string& what) {
  if (!a.allFinite()) throw NonFiniteError(what + ": non-finite entry");
}

EconSvd econ_svd(const Matrix& a) {
  if (a.rows() < a.cols())
    throw DimensionError("econ_svd: need rows >= cols, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  require_finite(a, "econ_svd");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Matrix pinv(const Matrix& a) {
  require_finite(a, "pinv");
  const bool tall = a.rows() >= a.cols();
  EconSvd s = econ_svd(tall ? a : Matrix(a.transpose()));
  const double smax = s.singulars.size() ? s.singulars(0) : 0.0;
  const double tau = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  Vector inv = Vector::Zero(s.singulars.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    if (s.singulars(i) > tau) inv(i) = 1.0 / s.singulars(i);
  // (S D V^T)^+ = V D^+ S^T
  Matrix p = s.right * inv.asDiagonal() * s.left.transpose();
  if (!tall) p.transposeInPlace();
  return p;
}

Matrix pos_part(const Matrix& a) { return (a.array().abs() + a.array()) * 0.5; }

Matrix neg_part(const Matrix& a) { return (a.array().abs() - a.array()) * 0.5; }

Matrix max_trace_orthogonal(const Matrix& u) {
  EconSvd s = econ_svd(u);
  return s.right * s.left.transpose();
}

double frob_sq(const Matrix& a) { return a.squaredNorm(); }

double weighted_resid_sq(const Vector& w, const Matrix& a) {
  if (w.size() != a.rows())
    throw DimensionError("weighted_resid_sq: weight length " + std::to_string(w.size()) +
                         " vs " + std::to_string(a.rows()) + " rows");
  return (w.asDiagonal() * a).squaredNorm();
}

}  // namespace dmfaw
