#include <gtest/gtest.h>

#include <random>

#include "dmfaw/kmeans.hpp"
#include "dmfaw/metrics.hpp"
#include "test_util.hpp"

using namespace dmfaw;

TEST(Kmeans, DuplicatedPoints) {
  Matrix pts(4, 1);
  pts << 0, 0, 10, 10;
  KmeansResult r = kmeans(pts, 2, 1, 100, 3);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[2], r.labels[3]);
  EXPECT_NE(r.labels[0], r.labels[2]);
  EXPECT_DOUBLE_EQ(r.inertia, 0.0);
}

TEST(Kmeans, SingleCluster) {
  std::mt19937_64 rng(4);
  Matrix pts = testutil::gaussian(25, 3, rng);
  KmeansResult r = kmeans(pts, 1, 9);
  for (int l : r.labels) EXPECT_EQ(l, 0);
  Eigen::RowVectorXd mean = pts.colwise().mean();
  EXPECT_LT((r.centroids.row(0) - mean).norm(), 1e-12);
  double total = (pts.rowwise() - mean).squaredNorm();
  EXPECT_NEAR(r.inertia, total, 1e-10);
}

TEST(Kmeans, SeparatedBlobs) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 0.1);
  Matrix pts(90, 2);
  std::vector<int> truth(90);
  const double cx[3] = {0, 10, 0}, cy[3] = {0, 0, 10};
  for (int i = 0; i < 90; ++i) {
    truth[i] = i / 30;
    pts(i, 0) = cx[truth[i]] + g(rng);
    pts(i, 1) = cy[truth[i]] + g(rng);
  }
  KmeansResult r = kmeans(pts, 3, 5, 300, 5);
  EXPECT_DOUBLE_EQ(accuracy(r.labels, truth), 1.0);
  // every point is closest to its own blob centroid
  for (int i = 0; i < 90; ++i)
    for (int c = 0; c < 3; ++c)
      EXPECT_LE((pts.row(i) - r.centroids.row(r.labels[i])).squaredNorm(),
                (pts.row(i) - r.centroids.row(c)).squaredNorm() + 1e-12);
}

TEST(Kmeans, InertiaMonotoneAndNoEmptyClusters) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    Matrix pts = testutil::gaussian(40, 3, rng);
    KmeansResult r = kmeans(pts, 7, t, 300, 1);
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
      EXPECT_LE(r.inertia_trace[i], r.inertia_trace[i - 1] + 1e-12);
    std::vector<int> count(7, 0);
    for (int l : r.labels) {
      ASSERT_GE(l, 0);
      ASSERT_LT(l, 7);
      ++count[l];
    }
    for (int c : count) EXPECT_GT(c, 0);
  }
}

TEST(Kmeans, EmptyClusterRepairWithDuplicates) {
  Matrix pts = Matrix::Zero(6, 2);
  pts(5, 0) = 1.0;
  KmeansResult r = kmeans(pts, 4, 3);
  std::vector<int> count(4, 0);
  for (int l : r.labels) ++count[l];
  for (int c : count) EXPECT_GT(c, 0);
}

TEST(Kmeans, SeedDeterminism) {
  std::mt19937_64 rng(2);
  Matrix pts = testutil::gaussian(60, 4, rng);
  KmeansResult a = kmeans(pts, 5, 42, 300, 4);
  KmeansResult b = kmeans(pts, 5, 42, 300, 4);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(Kmeans, InertiaIndependentOfLabelNames) {
  std::mt19937_64 rng(6);
  Matrix pts = testutil::gaussian(30, 2, rng);
  KmeansResult r = kmeans(pts, 3, 1);
  std::vector<int> perm = {2, 0, 1};
  double direct = 0.0, permuted = 0.0;
  Matrix cen(3, 2);
  for (int c = 0; c < 3; ++c) cen.row(perm[c]) = r.centroids.row(c);
  for (int i = 0; i < 30; ++i) {
    direct += (pts.row(i) - r.centroids.row(r.labels[i])).squaredNorm();
    permuted += (pts.row(i) - cen.row(perm[r.labels[i]])).squaredNorm();
  }
  EXPECT_DOUBLE_EQ(direct, permuted);
  EXPECT_NEAR(direct, r.inertia, 1e-12);
}

TEST(Kmeans, TooFewPoints) { EXPECT_THROW(kmeans(Matrix::Zero(2, 2), 3, 0), DimensionError); }
