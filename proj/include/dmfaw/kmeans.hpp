#pragma once

#include <cstdint>
#include <vector>

#include "dmfaw/linalg.hpp"

namespace dmfaw {

struct KmeansResult {
  std::vector<int> labels;
  Matrix centroids;  // k x dim
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // per Lloyd iteration of the winning restart
};

// Lloyd's algorithm with k-means++ seeding; points are rows.
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 300,
                    int n_init = 1);

}  // namespace dmfaw
