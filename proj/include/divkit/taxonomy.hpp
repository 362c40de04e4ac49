#pragma once

// Taxonomic distance, complete-linkage clustering swept over the level h, and
// the hierarchic social entropy S(R) = integral of H(R, h) dh.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "divkit/entropy.hpp"
#include "divkit/error.hpp"
#include "divkit/society.hpp"

namespace divkit {

/// Euclidean distance in feature space.
inline double taxonomic_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::validation,
          "taxonomic_distance: dimension mismatch (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    require(std::isfinite(a[k]) && std::isfinite(b[k]), ErrorKind::validation, "taxonomic_distance: non-finite entry");
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Symmetric, zero-diagonal matrix of pairwise distances, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  DistanceMatrix(std::vector<AgentId> ids, std::vector<double> entries) : ids_(std::move(ids)), d_(std::move(entries)) {
    const std::size_t n = ids_.size();
    require(d_.size() == n * n, ErrorKind::validation, "distance matrix: expected n*n entries");
    for (std::size_t i = 0; i < n; ++i) {
      require(at(i, i) == 0.0, ErrorKind::validation, "distance matrix: non-zero diagonal");
      for (std::size_t j = i + 1; j < n; ++j) {
        double v = at(i, j);
        require(std::isfinite(v) && v >= 0.0, ErrorKind::validation, "distance matrix: negative or non-finite entry");
        require(v == at(j, i), ErrorKind::validation, "distance matrix: not symmetric");
      }
    }
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<AgentId>& ids() const noexcept { return ids_; }
  double at(std::size_t i, std::size_t j) const { return d_[i * ids_.size() + j]; }

  double max_entry() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, v);
    return m;
  }

  /// Copy with every entry multiplied by `factor` (> 0).
  DistanceMatrix scaled(double factor) const {
    require(factor > 0.0 && std::isfinite(factor), ErrorKind::validation, "distance matrix: scale must be positive");
    std::vector<double> e = d_;
    for (double& v : e) v *= factor;
    return DistanceMatrix(ids_, std::move(e));
  }

 private:
  std::vector<AgentId> ids_;
  std::vector<double> d_;
};

inline DistanceMatrix distance_matrix(const Society& society) {
  require(!society.dimension_names().empty(), ErrorKind::validation, "distance_matrix: society has no feature dimensions");
  const std::size_t n = society.size();
  std::vector<AgentId> ids;
  ids.reserve(n);
  for (const Agent& a : society.agents()) ids.push_back(a.id);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i * n + j] = d[j * n + i] = taxonomic_distance(society[i].features, society[j].features);
  return DistanceMatrix(std::move(ids), std::move(d));
}

/// Divides every distance by the largest one, so the final merge happens at h = 1.
/// A matrix of all zeros is returned unchanged.
inline DistanceMatrix normalized(const DistanceMatrix& dm) {
  double m = dm.max_entry();
  return m > 0.0 ? dm.scaled(1.0 / m) : dm;
}

struct Merge {
  std::size_t left = 0;   // cluster ids: 0..n-1 are agents, n+k is the cluster made by merge k
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;  // n-1 merges, heights non-decreasing
};

/// Agglomerative complete linkage.
///
/// Each step merges the two clusters with the smallest maximum inter-member
/// distance. Equal distances are resolved by the lexicographically smallest
/// (min agent index, max agent index) pair, where a cluster is represented by
/// its lowest agent index.
inline Dendrogram complete_linkage(const DistanceMatrix& dm) {
  const std::size_t n = dm.size();
  Dendrogram out;
  out.leaves = n;
  if (n < 2) return out;

  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = dm.at(i, j);
  std::vector<char> active(n, 1);
  std::vector<std::size_t> cluster_id(n), cluster_size(n, 1);
  for (std::size_t i = 0; i < n; ++i) cluster_id[i] = i;

  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && d[i * n + j] < best) {
          best = d[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    out.merges.push_back({cluster_id[bi], cluster_id[bj], best, cluster_size[bi] + cluster_size[bj]});
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      double v = std::max(d[bi * n + k], d[bj * n + k]);
      d[bi * n + k] = d[k * n + bi] = v;
    }
    active[bj] = 0;
    cluster_id[bi] = n + step;
    cluster_size[bi] += cluster_size[bj];
  }
  return out;
}

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Any leaf of the cluster with the given dendrogram id.
inline std::size_t some_leaf(const Dendrogram& dg, std::size_t id) {
  while (id >= dg.leaves) id = dg.merges[id - dg.leaves].left;
  return id;
}

}  // namespace detail

/// Cut of the dendrogram at level h: every merge with height <= h is applied.
/// Blocks are ordered by their lowest agent index.
inline Partition cluster_at_level(const DistanceMatrix& dm, const Dendrogram& dg, double h) {
  require(h >= 0.0, ErrorKind::validation, "cluster_at_level: h must be non-negative");
  const std::size_t n = dm.size();
  detail::UnionFind uf(n);
  for (const Merge& m : dg.merges) {
    if (m.height > h) break;
    uf.unite(detail::some_leaf(dg, m.left), detail::some_leaf(dg, m.right));
  }
  Partition out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = uf.find(i);
    if (slot[r] == n) {
      slot[r] = out.blocks.size();
      out.blocks.emplace_back();
    }
    out.blocks[slot[r]].push_back(dm.ids()[i]);
  }
  return out;
}

inline Partition cluster_at_level(const DistanceMatrix& dm, double h) {
  return cluster_at_level(dm, complete_linkage(dm), h);
}

/// Piecewise-constant H(R, h).
///
/// `values[0]` holds on [0, breakpoints[0]), `values[k]` on
/// [breakpoints[k-1], breakpoints[k]) and the last value, always 0, from the
/// final breakpoint on. Merges at height 0 are folded into `values[0]`.
struct EntropyCurve {
  std::vector<double> breakpoints;
  std::vector<double> values;

  double at(double h) const {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), h);
    return values[static_cast<std::size_t>(it - breakpoints.begin())];
  }
};

inline EntropyCurve entropy_curve(const DistanceMatrix& dm, const Dendrogram& dg) {
  const std::size_t n = dm.size();
  EntropyCurve curve;
  if (n == 0) {
    curve.values.push_back(0.0);
    return curve;
  }
  // Cluster sizes tracked by dendrogram id; entropy recomputed after each height group.
  std::vector<std::size_t> size(n + dg.merges.size(), 0);
  std::vector<char> live(n + dg.merges.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    size[i] = 1;
    live[i] = 1;
  }
  auto entropy_now = [&] {
    std::vector<double> p;
    for (std::size_t c = 0; c < size.size(); ++c)
      if (live[c]) p.push_back(static_cast<double>(size[c]) / static_cast<double>(n));
    return shannon_bits(p);
  };

  std::size_t k = 0;
  const auto& merges = dg.merges;
  auto apply_group = [&](double height) {
    while (k < merges.size() && merges[k].height == height) {
      live[merges[k].left] = live[merges[k].right] = 0;
      live[n + k] = 1;
      size[n + k] = merges[k].size;
      ++k;
    }
  };
  if (!merges.empty() && merges.front().height == 0.0) apply_group(0.0);
  curve.values.push_back(entropy_now());
  while (k < merges.size()) {
    double height = merges[k].height;
    apply_group(height);
    curve.breakpoints.push_back(height);
    curve.values.push_back(entropy_now());
  }
  curve.values.back() = 0.0;  // single cluster; exact zero regardless of rounding
  return curve;
}

inline EntropyCurve entropy_curve(const DistanceMatrix& dm) { return entropy_curve(dm, complete_linkage(dm)); }

/// S(R) in bits x distance units.
struct HierarchicEntropy {
  double value = 0.0;
};

/// Exact integral of the piecewise-constant curve; zero beyond the last merge.
inline HierarchicEntropy integrate(const EntropyCurve& curve) {
  double s = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < curve.breakpoints.size(); ++k) {
    s += curve.values[k] * (curve.breakpoints[k] - prev);
    prev = curve.breakpoints[k];
  }
  return {s};
}

inline HierarchicEntropy hierarchic_entropy(const DistanceMatrix& dm) { return integrate(entropy_curve(dm)); }

inline HierarchicEntropy hierarchic_entropy(const Society& society, bool normalize = false) {
  DistanceMatrix dm = distance_matrix(society);
  return hierarchic_entropy(normalize ? normalized(dm) : dm);
}

/// merge_index,height,left_block,right_block
inline std::string dendrogram_csv(const Dendrogram& dg) {
  std::ostringstream os;
  os.precision(9);
  os << "merge_index,height,left_block,right_block\n";
  for (std::size_t k = 0; k < dg.merges.size(); ++k)
    os << k << ',' << dg.merges[k].height << ',' << dg.merges[k].left << ',' << dg.merges[k].right << '\n';
  return os.str();
}

/// h_start,h_end,entropy; the open final interval has an empty h_end.
inline std::string entropy_curve_csv(const EntropyCurve& curve) {
  std::ostringstream os;
  os.precision(9);
  os << "h_start,h_end,entropy\n";
  double prev = 0.0;
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    os << prev << ',';
    if (k < curve.breakpoints.size()) {
      os << curve.breakpoints[k];
      prev = curve.breakpoints[k];
    }
    os << ',' << curve.values[k] << '\n';
  }
  return os.str();
}

}  // namespace divkit
