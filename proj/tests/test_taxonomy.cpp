#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "divkit/entropy.hpp"
#include "divkit/taxonomy.hpp"
#include "oracles.hpp"

using namespace divkit;

namespace {

// Textbook complete linkage: recompute every cluster-pair distance from the raw
// points at each step. Returns merge heights.
std::vector<double> naive_heights(const Society& s) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < s.size(); ++i) clusters.push_back({i});
  std::vector<double> heights;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double d = 0.0;
        for (auto a : clusters[i])
          for (auto b : clusters[j]) d = std::max(d, oracle::euclid(s[a].features, s[b].features));
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    heights.push_back(best);
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<long>(bj));
  }
  return heights;
}

std::set<std::set<std::string>> as_sets(const Partition& p) {
  std::set<std::set<std::string>> out;
  for (const auto& b : p.blocks) {
    std::set<std::string> s;
    for (const auto& id : b) s.insert(id.value);
    out.insert(s);
  }
  return out;
}

bool coarsens(const Partition& fine, const Partition& coarse) {
  for (const auto& fb : as_sets(fine)) {
    bool inside = false;
    for (const auto& cb : as_sets(coarse))
      inside = inside || std::includes(cb.begin(), cb.end(), fb.begin(), fb.end());
    if (!inside) return false;
  }
  return true;
}

double block_entropy(const Partition& p) {
  std::vector<std::size_t> c;
  for (const auto& b : p.blocks) c.push_back(b.size());
  return oracle::entropy_of_counts(c);
}

Society random_points(std::mt19937_64& rng, std::size_t n, std::size_t dims, bool integer) {
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < dims; ++k) names.push_back("d" + std::to_string(k));
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> f;
    for (std::size_t k = 0; k < dims; ++k) f.push_back(integer ? std::floor(u(rng)) : u(rng));
    agents.push_back(oracle::agent("a" + std::to_string(i), {{"c", integer ? std::to_string(int(f[0])) : "x"}}, f));
  }
  return Society(names, std::move(agents));
}

}  // namespace

TEST(TaxonomicDistance, Basics) {
  std::vector<double> a{0, 0}, b{3, 4}, c{1};
  EXPECT_EQ(taxonomic_distance(a, a), 0.0);
  EXPECT_EQ(taxonomic_distance(a, b), 5.0);
  EXPECT_THROW(taxonomic_distance(a, c), Error);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(5), y(5);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    EXPECT_EQ(taxonomic_distance(x, y), taxonomic_distance(y, x));
    EXPECT_NEAR(taxonomic_distance(x, y), oracle::euclid(x, y), 1e-12);
  }
}

TEST(DistanceMatrix, Examples) {
  DistanceMatrix one = distance_matrix(oracle::points({3.0}));
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.at(0, 0), 0.0);
  DistanceMatrix two = distance_matrix(oracle::points({0.0, 1.0}));
  EXPECT_EQ(two.at(0, 1), 1.0);
  EXPECT_EQ(two.at(1, 0), 1.0);
  EXPECT_THROW(distance_matrix(oracle::labelled({"a", "b"})), Error);  // no feature dimensions
}

TEST(DistanceMatrix, MatchesRecomputation) {
  std::mt19937_64 rng(8);
  Society s = random_points(rng, 25, 3, false);
  DistanceMatrix dm = distance_matrix(s);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) EXPECT_NEAR(dm.at(i, j), oracle::euclid(s[i].features, s[j].features), 1e-12);
}

TEST(DistanceMatrix, RejectsInvalidEntries) {
  std::vector<AgentId> ids{AgentId("a"), AgentId("b")};
  EXPECT_THROW(DistanceMatrix(ids, {0, 1, 2, 0}), Error);   // asymmetric
  EXPECT_THROW(DistanceMatrix(ids, {1, 1, 1, 0}), Error);   // diagonal
  EXPECT_THROW(DistanceMatrix(ids, {0, -1, -1, 0}), Error);
  EXPECT_THROW(DistanceMatrix(ids, {0, 1, 1}), Error);
}

TEST(ClusterAtLevel, Examples) {
  Society s = oracle::points({1.0, 1.2, 1.8, 2.0});
  DistanceMatrix dm = distance_matrix(s);
  EXPECT_EQ(cluster_at_level(dm, 0.0).block_count(), 4u);
  EXPECT_EQ(cluster_at_level(dm, 1.0).block_count(), 1u);
  EXPECT_EQ(cluster_at_level(dm, 50.0).block_count(), 1u);
  Partition half = cluster_at_level(dm, 0.5);
  ASSERT_EQ(half.block_count(), 2u);
  EXPECT_EQ(half.blocks[0], (std::vector<AgentId>{AgentId("p0"), AgentId("p1")}));
  EXPECT_EQ(half.blocks[1], (std::vector<AgentId>{AgentId("p2"), AgentId("p3")}));
  EXPECT_THROW(cluster_at_level(dm, -0.1), Error);
}

TEST(CompleteLinkage, TieBreakLowestPair) {
  // Three equally spaced points: (0,1) and (1,2) tie at 1; (0,1) must merge first.
  DistanceMatrix dm = distance_matrix(oracle::points({0.0, 1.0, 2.0}));
  Dendrogram dg = complete_linkage(dm);
  ASSERT_EQ(dg.merges.size(), 2u);
  EXPECT_EQ(dg.merges[0].left, 0u);
  EXPECT_EQ(dg.merges[0].right, 1u);
  EXPECT_EQ(dg.merges[0].height, 1.0);
  EXPECT_EQ(dg.merges[1].height, 2.0);  // complete linkage: max(0-2, 1-2)
  EXPECT_EQ(dg.merges[1].size, 3u);
}

TEST(CompleteLinkage, MatchesNaiveHeights) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    Society s = random_points(rng, 2 + rng() % 15, 2, false);
    Dendrogram dg = complete_linkage(distance_matrix(s));
    auto ref = naive_heights(s);
    ASSERT_EQ(dg.merges.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(dg.merges[k].height, ref[k], 1e-12);
  }
}

TEST(EntropyCurve, HandDendrograms) {
  EntropyCurve same = entropy_curve(distance_matrix(oracle::points({2.0, 2.0, 2.0})));
  EXPECT_TRUE(same.breakpoints.empty());
  EXPECT_EQ(same.values, std::vector<double>{0.0});
  EXPECT_EQ(integrate(same).value, 0.0);

  EntropyCurve two = entropy_curve(distance_matrix(oracle::points({0.0, 0.5})));
  EXPECT_EQ(two.breakpoints, std::vector<double>{0.5});
  EXPECT_EQ(two.values, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(two.at(0.25), 1.0);
  EXPECT_EQ(two.at(0.5), 0.0);
  EXPECT_EQ(integrate(two).value, 0.5);

  EntropyCurve pairs = entropy_curve(distance_matrix(oracle::points({1.0, 1.2, 1.8, 2.0})));
  ASSERT_EQ(pairs.breakpoints.size(), 2u);
  EXPECT_NEAR(pairs.breakpoints[0], 0.2, 1e-12);
  EXPECT_EQ(pairs.breakpoints[1], 1.0);
  EXPECT_EQ(pairs.values, (std::vector<double>{2.0, 1.0, 0.0}));
  EXPECT_NEAR(integrate(pairs).value, 2 * 0.2 + 1 * 0.8, 1e-12);
}

TEST(HierarchicEntropy, ZeroIffIdentical) {
  EXPECT_EQ(hierarchic_entropy(oracle::points({4.0})).value, 0.0);
  EXPECT_EQ(hierarchic_entropy(oracle::points({4.0, 4.0})).value, 0.0);
  EXPECT_GT(hierarchic_entropy(oracle::points({4.0, 4.0 + 1e-9})).value, 0.0);
}

TEST(HierarchicEntropy, NormalizedModeEndsAtOne) {
  Society s = oracle::points({0.0, 3.0, 10.0});
  DistanceMatrix dm = normalized(distance_matrix(s));
  EntropyCurve c = entropy_curve(dm);
  EXPECT_DOUBLE_EQ(c.breakpoints.back(), 1.0);
  EXPECT_NEAR(hierarchic_entropy(s, true).value, hierarchic_entropy(s).value / 10.0, 1e-12);
}

TEST(HierarchicEntropy, RandomProperties) {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 30;
    Society s = random_points(rng, n, 1 + rng() % 3, t % 2 == 0);
    DistanceMatrix dm = distance_matrix(s);
    Dendrogram dg = complete_linkage(dm);
    EntropyCurve c = entropy_curve(dm, dg);

    // non-increasing curve ending at zero; log2 n at h = 0 when all distinct
    for (std::size_t k = 1; k < c.values.size(); ++k) EXPECT_LE(c.values[k], c.values[k - 1] + 1e-12);
    EXPECT_EQ(c.values.back(), 0.0);
    std::set<std::vector<double>> distinct;
    for (const auto& a : s.agents()) distinct.insert(a.features);
    if (distinct.size() == n) {
      EXPECT_NEAR(c.at(0.0), std::log2(double(n)), 1e-12);
    }

    // curve agrees with block entropy of the cut, and cuts refine monotonically
    std::vector<double> hs{0.0};
    for (double b : c.breakpoints) hs.push_back(b);
    for (double b : c.breakpoints) hs.push_back(b * 0.999);
    std::sort(hs.begin(), hs.end());
    for (std::size_t k = 0; k < hs.size(); ++k) {
      Partition p = cluster_at_level(dm, dg, hs[k]);
      EXPECT_NEAR(c.at(hs[k]), block_entropy(p), 1e-12);
      if (k > 0) {
        EXPECT_TRUE(coarsens(cluster_at_level(dm, dg, hs[k - 1]), p));
      }
    }

    // exact integral against a dense midpoint sum of the oracle entropy
    double s_ref = 0.0, prev = 0.0;
    for (double b : c.breakpoints) {
      s_ref += block_entropy(cluster_at_level(dm, dg, 0.5 * (prev + b))) * (b - prev);
      prev = b;
    }
    EXPECT_NEAR(integrate(c).value, s_ref, 1e-9);
  }
}

TEST(HierarchicEntropy, DuplicationInvariance) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 30; ++t) {
    Society s = random_points(rng, 2 + rng() % 12, 2, t % 2 == 0);
    for (int k = 2; k <= 3; ++k) {
      std::vector<Agent> dup;
      for (int copy = 0; copy < k; ++copy)
        for (Agent a : s.agents()) {
          a.id = AgentId(a.id.value + "_" + std::to_string(copy));
          dup.push_back(a);
        }
      Society big(s.dimension_names(), dup);
      EXPECT_NEAR(hierarchic_entropy(big).value, hierarchic_entropy(s).value, 1e-9);
      EXPECT_NEAR(simple_social_entropy(big, "c").bits, simple_social_entropy(s, "c").bits, 1e-12);
    }
  }
}

TEST(HierarchicEntropy, DistanceScaleCovariance) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    Society s = random_points(rng, 2 + rng() % 20, 2, false);
    for (double c : {0.5, 3.0, 7.25}) {
      std::vector<Agent> scaled = s.agents();
      for (auto& a : scaled)
        for (auto& f : a.features) f *= c;
      EXPECT_NEAR(hierarchic_entropy(Society(s.dimension_names(), scaled)).value, c * hierarchic_entropy(s).value, 1e-9);
    }
  }
}

TEST(HierarchicEntropy, ContinuitySmallMove) {
  // With the merge order unchanged every merge height moves by at most delta,
  // and S = sum_k h_k (H_{k-1} - H_k), so |dS| <= delta * log2 n.
  std::mt19937_64 rng(44);
  const double delta = 1e-9;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 10;
    Society s = random_points(rng, n, 2, false);
    std::vector<Agent> moved = s.agents();
    moved[rng() % n].features[0] += delta;
    double ds = std::abs(hierarchic_entropy(Society(s.dimension_names(), moved)).value - hierarchic_entropy(s).value);
    EXPECT_LE(ds, delta * std::log2(double(n)) + 1e-12);
  }
}

TEST(Export, CsvShapes) {
  DistanceMatrix dm = distance_matrix(oracle::points({0.0, 0.5}));
  EXPECT_EQ(dendrogram_csv(complete_linkage(dm)), "merge_index,height,left_block,right_block\n0,0.5,0,1\n");
  EXPECT_EQ(entropy_curve_csv(entropy_curve(dm)), "h_start,h_end,entropy\n0,0.5,1\n0.5,,0\n");
}
