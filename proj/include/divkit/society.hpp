#pragma once

// Agent societies: the value types every diversity metric consumes.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "divkit/error.hpp"

namespace divkit {

struct AgentId {
  std::string value;

  AgentId() = default;
  explicit AgentId(std::string v) : value(std::move(v)) {}

  auto operator<=>(const AgentId&) const = default;
};

inline std::string to_string(const AgentId& id) { return id.value; }

struct Agent {
  AgentId id;
  std::map<std::string, std::string> attributes;  // exact-match categorical values
  std::vector<double> features;
};

/// An immutable, validated collection of agents.
///
/// All agents share one attribute-name set and one feature width equal to
/// `dimension_names().size()`. Agent order is kept as given so every derived
/// output (partitions, matrices, reports) is ordered deterministically.
class Society {
 public:
  Society() = default;

  Society(std::vector<std::string> dimension_names, std::vector<Agent> agents)
      : dimension_names_(std::move(dimension_names)), agents_(std::move(agents)) {
    validate();
  }

  const std::vector<Agent>& agents() const noexcept { return agents_; }
  const std::vector<std::string>& dimension_names() const noexcept { return dimension_names_; }
  std::size_t size() const noexcept { return agents_.size(); }
  bool empty() const noexcept { return agents_.empty(); }
  const Agent& operator[](std::size_t i) const { return agents_.at(i); }

  std::size_t index_of(const AgentId& id) const {
    auto it = index_.find(id.value);
    if (it == index_.end()) fail(ErrorKind::not_found, "unknown agent id '" + id.value + "'");
    return it->second;
  }

  bool contains(const AgentId& id) const { return index_.count(id.value) != 0; }

  bool has_attribute(const std::string& name) const {
    return !agents_.empty() && agents_.front().attributes.count(name) != 0;
  }

 private:
  void validate() {
    index_.clear();
    const std::size_t width = dimension_names_.size();
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const Agent& a = agents_[i];
      require(!a.id.value.empty(), ErrorKind::validation, "agents[" + std::to_string(i) + "]: empty id");
      require(index_.emplace(a.id.value, i).second, ErrorKind::validation,
              "agents[" + std::to_string(i) + "]: duplicate id '" + a.id.value + "'");
      require(a.features.size() == width, ErrorKind::validation,
              "agents[" + std::to_string(i) + "].features: expected " + std::to_string(width) + " values, got " +
                  std::to_string(a.features.size()));
      for (std::size_t k = 0; k < width; ++k) {
        require(std::isfinite(a.features[k]), ErrorKind::validation,
                "agents[" + std::to_string(i) + "].features[" + std::to_string(k) + "]: non-finite value");
      }
      if (i > 0) {
        const auto& ref = agents_.front().attributes;
        bool same = ref.size() == a.attributes.size();
        for (auto it = ref.begin(), jt = a.attributes.begin(); same && it != ref.end(); ++it, ++jt)
          same = it->first == jt->first;
        require(same, ErrorKind::validation,
                "agents[" + std::to_string(i) + "].attributes: attribute names differ from agents[0]");
      }
    }
  }

  std::vector<std::string> dimension_names_;
  std::vector<Agent> agents_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Disjoint, non-empty blocks of agents covering a society.
struct Partition {
  std::vector<std::vector<AgentId>> blocks;
  std::vector<std::string> labels;  // optional, one per block when present

  std::size_t block_count() const noexcept { return blocks.size(); }
};

inline void validate_partition(const Partition& partition, const Society& society) {
  require(partition.labels.empty() || partition.labels.size() == partition.blocks.size(), ErrorKind::validation,
          "partition: label count does not match block count");
  std::vector<char> seen(society.size(), 0);
  std::size_t covered = 0;
  for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
    require(!partition.blocks[b].empty(), ErrorKind::validation, "partition: block " + std::to_string(b) + " is empty");
    for (const AgentId& id : partition.blocks[b]) {
      require(society.contains(id), ErrorKind::validation, "partition: agent '" + id.value + "' not in society");
      std::size_t i = society.index_of(id);
      require(!seen[i], ErrorKind::validation, "partition: agent '" + id.value + "' appears in more than one block");
      seen[i] = 1;
      ++covered;
    }
  }
  require(covered == society.size(), ErrorKind::validation, "partition: blocks do not cover every agent");
}

inline constexpr double kProportionTolerance = 1e-12;

/// Class proportions p_i >= 0 summing to one.
class Distribution {
 public:
  Distribution() = default;

  explicit Distribution(std::vector<double> proportions, std::vector<std::string> labels = {})
      : proportions_(std::move(proportions)), labels_(std::move(labels)) {
    require(!proportions_.empty(), ErrorKind::validation, "distribution: no classes");
    require(labels_.empty() || labels_.size() == proportions_.size(), ErrorKind::validation,
            "distribution: label count does not match class count");
    double sum = 0.0;
    for (std::size_t i = 0; i < proportions_.size(); ++i) {
      double p = proportions_[i];
      require(std::isfinite(p) && p >= 0.0, ErrorKind::validation,
              "distribution: proportion " + std::to_string(i) + " is negative or non-finite");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= kProportionTolerance, ErrorKind::validation,
            "distribution: proportions sum to " + std::to_string(sum) + ", not 1");
  }

  /// Builds proportions from non-negative class counts.
  template <typename Count>
  static Distribution from_counts(const std::vector<Count>& counts, std::vector<std::string> labels = {}) {
    double total = 0.0;
    for (const Count& c : counts) {
      require(static_cast<double>(c) >= 0.0, ErrorKind::validation, "distribution: negative count");
      total += static_cast<double>(c);
    }
    require(total > 0.0, ErrorKind::validation, "distribution: counts sum to zero");
    std::vector<double> p;
    p.reserve(counts.size());
    for (const Count& c : counts) p.push_back(static_cast<double>(c) / total);
    return Distribution(std::move(p), std::move(labels));
  }

  const std::vector<double>& proportions() const noexcept { return proportions_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return proportions_.size(); }

 private:
  std::vector<double> proportions_;
  std::vector<std::string> labels_;
};

/// Groups agents by exact attribute value, blocks ordered by first appearance.
inline Partition partition_by_attribute(const Society& society, const std::string& attribute) {
  Partition out;
  std::map<std::string, std::size_t> block_of;
  for (const Agent& a : society.agents()) {
    auto it = a.attributes.find(attribute);
    require(it != a.attributes.end(), ErrorKind::not_found, "unknown attribute '" + attribute + "'");
    auto [pos, inserted] = block_of.emplace(it->second, out.blocks.size());
    if (inserted) {
      out.blocks.emplace_back();
      out.labels.push_back(it->second);
    }
    out.blocks[pos->second].push_back(a.id);
  }
  return out;
}

inline Distribution partition_to_distribution(const Partition& partition, const Society& society) {
  require(!society.empty(), ErrorKind::validation, "empty society");
  validate_partition(partition, society);
  std::vector<std::size_t> counts;
  counts.reserve(partition.blocks.size());
  for (const auto& b : partition.blocks) counts.push_back(b.size());
  return Distribution::from_counts(counts, partition.labels);
}

/// Partition from per-agent block indices (0..k-1, dense), ordered by block index.
inline Partition partition_from_labels(const Society& society, const std::vector<std::size_t>& block_index) {
  require(block_index.size() == society.size(), ErrorKind::validation, "partition: one block index per agent required");
  std::size_t k = 0;
  for (std::size_t b : block_index) k = std::max(k, b + 1);
  Partition out;
  out.blocks.resize(k);
  for (std::size_t i = 0; i < block_index.size(); ++i) out.blocks[block_index[i]].push_back(society[i].id);
  std::erase_if(out.blocks, [](const auto& b) { return b.empty(); });
  return out;
}

/// Sub-society restricted to the given agents, in society order.
inline Society restrict_to(const Society& society, const std::vector<AgentId>& members) {
  std::set<std::string> keep;
  for (const AgentId& id : members) keep.insert(id.value);
  std::vector<Agent> agents;
  for (const Agent& a : society.agents())
    if (keep.count(a.id.value)) agents.push_back(a);
  return Society(society.dimension_names(), std::move(agents));
}

}  // namespace divkit
