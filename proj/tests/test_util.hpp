#pragma once

#include <random>
#include <vector>

#include "dmfaw/linalg.hpp"

namespace testutil {

inline dmfaw::Matrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  dmfaw::Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

// Random k x n matrix with orthonormal rows, from QR of a Gaussian matrix.
inline dmfaw::Matrix random_row_orthonormal(Eigen::Index k, Eigen::Index n, std::mt19937_64& rng) {
  dmfaw::Matrix a = gaussian(n, k, rng);
  Eigen::HouseholderQR<dmfaw::Matrix> qr(a);
  dmfaw::Matrix q = qr.householderQ() * dmfaw::Matrix::Identity(n, k);
  return q.transpose();
}

inline bool beats_random_orthonormal(const dmfaw::Matrix& g, const dmfaw::Matrix& u, int samples,
                                     std::mt19937_64& rng, double slack) {
  const double best = (g * u).trace();
  for (int s = 0; s < samples; ++s) {
    dmfaw::Matrix q = random_row_orthonormal(u.cols(), u.rows(), rng);
    if ((q * u).trace() > best + slack) return false;
  }
  return true;
}

// Labels from a flat uniform draw in [0, k).
inline std::vector<int> random_labels(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, k - 1);
  std::vector<int> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

}  // namespace testutil
