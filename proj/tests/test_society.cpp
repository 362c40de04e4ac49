#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "divkit/society.hpp"
#include "oracles.hpp"

using namespace divkit;

namespace {

Society block_star() {
  return oracle::labelled({"block", "star", "star", "star"});
}

std::vector<std::size_t> sizes(const Partition& p) {
  std::vector<std::size_t> s;
  for (const auto& b : p.blocks) s.push_back(b.size());
  return s;
}

}  // namespace

TEST(Society, ValidatesIdsAndWidths) {
  using oracle::agent;
  EXPECT_THROW(Society({}, {agent("a", {}), agent("a", {})}), Error);
  EXPECT_THROW(Society({}, {agent("", {})}), Error);
  EXPECT_THROW(Society({"x"}, {agent("a", {}, {})}), Error);
  EXPECT_THROW(Society({"x"}, {agent("a", {}, {std::nan("")})}), Error);
  EXPECT_THROW(Society({"x"}, {agent("a", {}, {INFINITY})}), Error);
  EXPECT_THROW(Society({}, {agent("a", {{"k", "1"}}), agent("b", {{"j", "1"}})}), Error);
  Society s({"x"}, {agent("a", {{"k", "1"}}, {0.0}), agent("b", {{"k", "2"}}, {1.0})});
  EXPECT_EQ(s.index_of(AgentId("b")), 1u);
  EXPECT_TRUE(s.contains(AgentId("a")));
  EXPECT_FALSE(s.contains(AgentId("zz")));
  EXPECT_THROW(s.index_of(AgentId("zz")), Error);
}

TEST(Society, DuplicateIdIsValidationError) {
  try {
    Society({}, {oracle::agent("dup", {}), oracle::agent("dup", {})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
}

TEST(PartitionByAttribute, BlockAndStars) {
  Society s = block_star();
  Partition p = partition_by_attribute(s, "k");
  EXPECT_EQ(sizes(p), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(p.labels, (std::vector<std::string>{"block", "star"}));
}

TEST(PartitionByAttribute, AllSameIsSingleBlock) {
  Partition p = partition_by_attribute(oracle::labelled({"x", "x", "x"}), "k");
  ASSERT_EQ(p.block_count(), 1u);
  EXPECT_EQ(p.blocks[0].size(), 3u);
}

TEST(PartitionByAttribute, ElevenDistinctPositions) {
  std::vector<std::string> l;
  for (int i = 0; i < 11; ++i) l.push_back("pos" + std::to_string(i));
  EXPECT_EQ(sizes(partition_by_attribute(oracle::labelled(l), "k")), std::vector<std::size_t>(11, 1));
}

TEST(PartitionByAttribute, UnknownAttributeNamed) {
  try {
    partition_by_attribute(block_star(), "colour");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_found);
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(PartitionByAttribute, Idempotent) {
  Society s = oracle::labelled({"a", "b", "a", "c", "b"});
  Partition p1 = partition_by_attribute(s, "k");
  std::vector<AgentId> order;
  for (const auto& b : p1.blocks) order.insert(order.end(), b.begin(), b.end());
  Partition p2 = partition_by_attribute(restrict_to(s, order), "k");
  EXPECT_EQ(p1.blocks, p2.blocks);
}

TEST(PartitionToDistribution, Examples) {
  Society s = block_star();
  Distribution d = partition_to_distribution(partition_by_attribute(s, "k"), s);
  EXPECT_DOUBLE_EQ(d.proportions()[0], 0.25);
  EXPECT_DOUBLE_EQ(d.proportions()[1], 0.75);

  Society one = oracle::labelled({"q", "q"});
  EXPECT_EQ(partition_to_distribution(partition_by_attribute(one, "k"), one).proportions(), std::vector<double>{1.0});

  std::vector<std::string> agr{"G"};
  for (int i = 0; i < 3; ++i) agr.push_back("CD");
  for (int i = 0; i < 8; ++i) agr.push_back("CF");
  Society a = oracle::labelled(agr);
  auto p = partition_to_distribution(partition_by_attribute(a, "k"), a).proportions();
  EXPECT_DOUBLE_EQ(p[0], 1.0 / 12);
  EXPECT_DOUBLE_EQ(p[1], 3.0 / 12);
  EXPECT_DOUBLE_EQ(p[2], 8.0 / 12);
}

TEST(PartitionToDistribution, EmptySocietyRejected) {
  Society empty({}, {});
  EXPECT_THROW(partition_to_distribution(Partition{}, empty), Error);
}

TEST(ValidatePartition, RejectsBadPartitions) {
  Society s = oracle::labelled({"a", "b", "c"});
  auto id = [](const char* v) { return AgentId(v); };
  EXPECT_THROW(validate_partition({{{id("r0"), id("r1")}, {id("r1"), id("r2")}}, {}}, s), Error);  // overlap
  EXPECT_THROW(validate_partition({{{id("r0")}, {id("r1")}}, {}}, s), Error);                       // not covering
  EXPECT_THROW(validate_partition({{{id("r0"), id("r1"), id("r2")}, {}}, {}}, s), Error);           // empty block
  EXPECT_THROW(validate_partition({{{id("r0"), id("r1"), id("x")}}, {}}, s), Error);                // foreign id
  EXPECT_NO_THROW(validate_partition({{{id("r2")}, {id("r0"), id("r1")}}, {}}, s));
}

TEST(Distribution, Validation) {
  EXPECT_THROW(Distribution(std::vector<double>{}), Error);
  EXPECT_THROW(Distribution({0.5, 0.6}), Error);
  EXPECT_THROW(Distribution({-0.1, 1.1}), Error);
  EXPECT_THROW(Distribution({0.5, 0.5}, {"only-one"}), Error);
  EXPECT_NO_THROW(Distribution({0.5, 0.5 + 1e-13}));
  EXPECT_THROW(Distribution::from_counts(std::vector<int>{0, 0}), Error);
  EXPECT_EQ(Distribution::from_counts(std::vector<int>{1, 3}).proportions(), (std::vector<double>{0.25, 0.75}));
}

TEST(SocietyProperties, RoundTripAndPermutationInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 40;
    Society s = oracle::random_society(rng, n, 1, 1 + static_cast<int>(rng() % 5));
    Distribution d = partition_to_distribution(partition_by_attribute(s, "color"), s);
    double sum = std::accumulate(d.proportions().begin(), d.proportions().end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-12);

    std::vector<Agent> shuffled = s.agents();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Society t(s.dimension_names(), shuffled);
    auto p1 = d.proportions();
    auto p2 = partition_to_distribution(partition_by_attribute(t, "color"), t).proportions();
    std::sort(p1.begin(), p1.end());
    std::sort(p2.begin(), p2.end());
    EXPECT_EQ(p1, p2);
  }
}

TEST(PartitionFromLabels, DenseBlocks) {
  Society s = oracle::labelled({"a", "b", "c", "d"});
  Partition p = partition_from_labels(s, {1, 0, 1, 3});
  EXPECT_EQ(p.block_count(), 3u);
  EXPECT_EQ(p.blocks[0], std::vector<AgentId>{AgentId("r1")});
  EXPECT_THROW(partition_from_labels(s, {0, 1}), Error);
}
