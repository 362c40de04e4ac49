#pragma once

// Shannon entropy, simple social entropy, its grouping decomposition, and the
// probability-of-difference ("USA Today") index.

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "divkit/error.hpp"
#include "divkit/society.hpp"

namespace divkit {

/// Base-2 entropy, in bits.
struct EntropyValue {
  double bits = 0.0;
};

/// Probability that two agents drawn with replacement differ on at least one dimension.
struct DiversityIndex {
  double probability = 0.0;
};

// 0 log 0 = 0.
inline double shannon_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h < 0.0 ? 0.0 : h;  // -0.0 and sub-ulp negatives from rounding
}

inline EntropyValue shannon_entropy(const Distribution& dist) { return {shannon_bits(dist.proportions())}; }

inline EntropyValue shannon_entropy(std::span<const double> proportions) {
  return shannon_entropy(Distribution(std::vector<double>(proportions.begin(), proportions.end())));
}

inline EntropyValue simple_social_entropy(const Society& society, const std::string& attribute) {
  return shannon_entropy(partition_to_distribution(partition_by_attribute(society, attribute), society));
}

struct WeightedEntropy {
  double weight = 0.0;
  EntropyValue within;
};

struct GroupingDecomposition {
  EntropyValue between;
  std::vector<WeightedEntropy> within;  // one per block, in block order

  double recombined() const {
    double total = between.bits;
    for (const auto& w : within) total += w.weight * w.within.bits;
    return total;
  }
};

/// Splits the attribute entropy of `society` into the entropy of block sizes and
/// the weighted entropies inside each block.
///
/// When every attribute class lies entirely inside one block, `recombined()`
/// equals `simple_social_entropy(society, attribute)`.
inline GroupingDecomposition grouping_decomposition(const Society& society, const Partition& partition,
                                                    const std::string& attribute) {
  require(!society.empty(), ErrorKind::validation, "empty society");
  validate_partition(partition, society);
  require(society.has_attribute(attribute), ErrorKind::not_found, "unknown attribute '" + attribute + "'");

  GroupingDecomposition out;
  out.between = shannon_entropy(partition_to_distribution(partition, society));
  const double n = static_cast<double>(society.size());
  for (const auto& block : partition.blocks) {
    std::map<std::string, std::size_t> counts;
    for (const AgentId& id : block) ++counts[society[society.index_of(id)].attributes.at(attribute)];
    std::vector<std::size_t> c;
    for (const auto& [_, k] : counts) c.push_back(k);
    out.within.push_back({static_cast<double>(block.size()) / n, shannon_entropy(Distribution::from_counts(c))});
  }
  return out;
}

namespace detail {

inline std::string joint_key(const Agent& a, const std::vector<std::string>& dimensions) {
  std::string key;
  for (const auto& d : dimensions) {
    auto it = a.attributes.find(d);
    require(it != a.attributes.end(), ErrorKind::not_found, "unknown attribute '" + d + "'");
    // Length-prefixed so that ("ab","c") and ("a","bc") stay distinct.
    key += std::to_string(it->second.size());
    key += ':';
    key += it->second;
  }
  return key;
}

}  // namespace detail

/// 1 - sum_c q_c^2 over joint attribute combinations c of the named dimensions.
inline DiversityIndex usa_today_index(const Society& society, const std::vector<std::string>& dimensions) {
  require(!dimensions.empty(), ErrorKind::validation, "usa_today_index: empty dimension list");
  require(!society.empty(), ErrorKind::validation, "empty society");
  std::map<std::string, std::size_t> counts;
  for (const Agent& a : society.agents()) ++counts[detail::joint_key(a, dimensions)];
  const double n = static_cast<double>(society.size());
  double same = 0.0;
  for (const auto& [_, k] : counts) {
    double q = static_cast<double>(k) / n;
    same += q * q;
  }
  double p = 1.0 - same;
  return {p < 0.0 ? 0.0 : p};
}

struct RecursionGap {
  DiversityIndex combined;
  double weighted_sum = 0.0;

  double gap() const { return combined.probability - weighted_sum; }
};

/// Compares the index of the pooled society against the size-weighted sum of
/// sub-society indices. The two differ in general: the index is not recursive.
inline RecursionGap usa_today_recursion_gap(const std::vector<Society>& parts, const std::vector<std::string>& dimensions) {
  require(!parts.empty(), ErrorKind::validation, "usa_today_recursion_gap: no sub-societies");
  const auto& schema = parts.front().dimension_names();
  std::vector<Agent> pooled;
  std::size_t total = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Society& s = parts[k];
    require(!s.empty(), ErrorKind::validation, "sub-society " + std::to_string(k) + " is empty");
    require(s.dimension_names() == schema, ErrorKind::validation,
            "sub-society " + std::to_string(k) + ": feature dimensions differ from sub-society 0");
    require(parts.front()[0].attributes.size() == s[0].attributes.size(), ErrorKind::validation,
            "sub-society " + std::to_string(k) + ": attribute names differ from sub-society 0");
    for (const auto& [name, _] : parts.front()[0].attributes)
      require(s.has_attribute(name), ErrorKind::validation,
              "sub-society " + std::to_string(k) + ": missing attribute '" + name + "'");
    total += s.size();
    for (const Agent& a : s.agents()) {
      Agent copy = a;
      copy.id = AgentId(std::to_string(k) + "/" + a.id.value);
      pooled.push_back(std::move(copy));
    }
  }
  RecursionGap out;
  out.combined = usa_today_index(Society(schema, std::move(pooled)), dimensions);
  for (const Society& s : parts)
    out.weighted_sum += static_cast<double>(s.size()) / static_cast<double>(total) * usa_today_index(s, dimensions).probability;
  return out;
}

}  // namespace divkit
