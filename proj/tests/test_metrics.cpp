#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "dmfaw/metrics.hpp"
#include "test_util.hpp"

using namespace dmfaw;

namespace {

double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::vector<int> pv = pred, tv = truth;
  std::sort(pv.begin(), pv.end());
  pv.erase(std::unique(pv.begin(), pv.end()), pv.end());
  std::sort(tv.begin(), tv.end());
  tv.erase(std::unique(tv.begin(), tv.end()), tv.end());
  const std::size_t m = std::max(pv.size(), tv.size());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  long best = 0;
  do {
    long hit = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const auto a = std::find(pv.begin(), pv.end(), pred[i]) - pv.begin();
      const auto b = std::find(tv.begin(), tv.end(), truth[i]) - tv.begin();
      if (perm[a] == b) ++hit;
    }
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

// Entropy-sum form: I = H(p) + H(t) - H(p, t).
double oracle_nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<int, double> cp, ct;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    cp[pred[i]] += 1;
    ct[truth[i]] += 1;
    joint[{pred[i], truth[i]}] += 1;
  }
  auto h = [n](const auto& counts) {
    double s = 0.0;
    for (const auto& [key, c] : counts) s -= c / n * std::log(c / n);
    return s;
  };
  const double hp = h(cp), ht = h(ct), hj = h(joint);
  if (hp == 0.0 || ht == 0.0) return (hp == 0.0 && ht == 0.0) ? 1.0 : 0.0;
  return (hp + ht - hj) / std::sqrt(hp * ht);
}

double oracle_purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::map<int, std::map<int, int>> table;
  for (std::size_t i = 0; i < pred.size(); ++i) ++table[pred[i]][truth[i]];
  int hit = 0;
  for (const auto& [c, row] : table) {
    int m = 0;
    for (const auto& [t, cnt] : row) m = std::max(m, cnt);
    hit += m;
  }
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

}  // namespace

TEST(Accuracy, LabelSwap) { EXPECT_DOUBLE_EQ(accuracy({1, 1, 0, 0}, {0, 0, 1, 1}), 1.0); }

TEST(Accuracy, SingleCluster) { EXPECT_DOUBLE_EQ(accuracy({0, 0, 0, 0}, {0, 0, 1, 1}), 0.5); }

TEST(Accuracy, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> kd(1, 6), nd(1, 12);
  for (int t = 0; t < 200; ++t) {
    const int n = nd(rng);
    auto pred = testutil::random_labels(n, kd(rng), rng);
    auto truth = testutil::random_labels(n, kd(rng), rng);
    EXPECT_NEAR(accuracy(pred, truth), brute_force_accuracy(pred, truth), 1e-15);
  }
}

TEST(Accuracy, NonContiguousLabels) {
  EXPECT_DOUBLE_EQ(accuracy({7, 7, -3, 100}, {1, 1, 2, 2}), 0.75);
}

TEST(Accuracy, LengthMismatch) { EXPECT_THROW(accuracy({0, 1}, {0}), DimensionError); }

TEST(Assignment, SquareMaximum) {
  std::vector<std::vector<double>> w = {{1, 5, 2}, {4, 1, 1}, {2, 2, 3}};
  auto m = max_weight_assignment(w);
  EXPECT_EQ(m, (std::vector<int>{1, 0, 2}));
}

TEST(Nmi, Identical) { EXPECT_NEAR(nmi({0, 0, 1, 2, 2}, {5, 5, 3, 1, 1}), 1.0, 1e-15); }

TEST(Nmi, Independent) { EXPECT_NEAR(nmi({0, 0, 1, 1}, {0, 1, 0, 1}), 0.0, 1e-15); }

TEST(Nmi, SmallFixtureAgainstOracle) {
  std::vector<int> p = {0, 0, 1, 1}, t = {0, 0, 0, 1};
  EXPECT_NEAR(nmi(p, t), oracle_nmi(p, t), 1e-12);
  // table [[2,0],[1,1]] summed by hand
  const double hp = std::log(2.0);
  const double ht = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  const double i = 0.5 * std::log(0.5 / (0.5 * 0.75)) + 0.25 * std::log(0.25 / (0.5 * 0.75)) +
                   0.25 * std::log(0.25 / (0.5 * 0.25));
  EXPECT_NEAR(nmi(p, t), i / std::sqrt(hp * ht), 1e-12);
}

TEST(Nmi, ConstantPartitions) {
  EXPECT_DOUBLE_EQ(nmi({3, 3, 3}, {1, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(nmi({3, 3, 3}, {1, 2, 1}), 0.0);
}

TEST(Purity, Examples) {
  EXPECT_DOUBLE_EQ(purity({0, 1, 2}, {2, 0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(purity({0, 0, 0, 0}, {0, 0, 1, 1}), 0.5);
}

TEST(Metrics, OraclesAndOrdering) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> kd(1, 6), nd(1, 40);
  for (int t = 0; t < 300; ++t) {
    const int n = nd(rng);
    auto pred = testutil::random_labels(n, kd(rng), rng);
    auto truth = testutil::random_labels(n, kd(rng), rng);
    const double a = accuracy(pred, truth), p = purity(pred, truth), m = nmi(pred, truth);
    EXPECT_NEAR(m, oracle_nmi(pred, truth), 1e-12);
    EXPECT_NEAR(p, oracle_purity(pred, truth), 1e-12);
    EXPECT_LE(a, p + 1e-15);
    EXPECT_LE(p, 1.0);
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0 + 1e-12);
  }
}

TEST(Metrics, RelabelingInvariance) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto pred = testutil::random_labels(20, 4, rng);
    auto truth = testutil::random_labels(20, 3, rng);
    std::vector<int> relabel = {9, -1, 4, 2};
    std::vector<int> pred2(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) pred2[i] = relabel[pred[i]];
    EXPECT_DOUBLE_EQ(accuracy(pred, truth), accuracy(pred2, truth));
    EXPECT_NEAR(nmi(pred, truth), nmi(pred2, truth), 1e-15);
    EXPECT_DOUBLE_EQ(purity(pred, truth), purity(pred2, truth));
  }
}

TEST(Similarity, OneHotBlocks) {
  Matrix g = Matrix::Zero(2, 4);
  g(0, 0) = g(1, 1) = g(0, 2) = g(1, 3) = 1.0;
  std::vector<int> truth = {0, 1, 0, 1};
  Similarity s = pairwise_similarity(g, &truth);
  EXPECT_EQ(s.order, (std::vector<int>{0, 2, 1, 3}));
  Matrix e(4, 4);
  e << 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1;
  EXPECT_LT((s.s - e).norm(), 1e-15);
}

TEST(Similarity, DuplicateColumnsAndSymmetry) {
  std::mt19937_64 rng(4);
  Matrix g = testutil::gaussian(3, 10, rng);
  g.col(7) = 2.5 * g.col(2);
  Similarity s = pairwise_similarity(g);
  EXPECT_NEAR(s.s(2, 7), 1.0, 1e-12);
  EXPECT_LT((s.s - s.s.transpose()).norm(), 1e-12);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(s.s(i, i), 1.0, 1e-10);
  EXPECT_LE(s.s.maxCoeff(), 1.0);
  EXPECT_GE(s.s.minCoeff(), -1.0);
}
