#include "funderlink/clustering.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "funderlink/parallel.hpp"
#include "funderlink/union_find.hpp"

namespace funderlink {

std::vector<Edge> build_similarity_graph(std::span<const MinHashSignature> signatures,
                                         const LshIndex& lsh, double threshold,
                                         unsigned workers) {
  std::vector<std::vector<Edge>> per_node(signatures.size());
  parallel_for(signatures.size(), workers, [&](std::size_t i) {
    const auto id = static_cast<std::uint32_t>(i);
    for (const std::uint32_t j : lsh.query(signatures[i], id)) {
      if (j <= id || j >= signatures.size()) continue;
      if (estimate_similarity(signatures[i], signatures[j]) >= threshold) {
        per_node[i].push_back({id, j});
      }
    }
  });
  std::vector<Edge> edges;
  for (auto& list : per_node) edges.insert(edges.end(), list.begin(), list.end());
  return edges;
}

std::vector<Cluster> connected_components(std::span<const Edge> edges, std::size_t n,
                                          std::span<const std::uint64_t> counts) {
  if (!counts.empty() && counts.size() != n) {
    throw std::invalid_argument("connected_components: counts size does not match node count");
  }
  UnionFind uf(n);
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n) {
      throw std::out_of_range("connected_components: edge (" + std::to_string(e.a) + "," +
                              std::to_string(e.b) + ") references a node outside [0," +
                              std::to_string(n) + ")");
    }
    uf.unite(e.a, e.b);
  }
  std::vector<Cluster> clusters;
  for (auto& group : uf.groups()) {
    Cluster c;
    c.cluster_id = static_cast<std::uint32_t>(clusters.size());
    c.member_ids.assign(group.begin(), group.end());
    c.representative_id = c.member_ids.front();
    if (!counts.empty()) {
      for (const std::uint32_t m : c.member_ids) {
        if (counts[m] > counts[c.representative_id]) c.representative_id = m;
      }
    }
    clusters.push_back(std::move(c));
  }
  return clusters;
}

std::size_t audit_cluster_diameter(std::span<const Cluster> clusters,
                                   std::span<const MinHashSignature> signatures, AuditLog& log,
                                   double min_similarity, std::size_t max_members) {
  std::size_t flagged = 0;
  for (const auto& c : clusters) {
    if (c.member_ids.size() < 3) continue;  // a pair is an edge, already >= threshold
    if (c.member_ids.size() > max_members) {
      log.info("cluster_diameter", "cluster " + std::to_string(c.cluster_id) + " has " +
                                       std::to_string(c.member_ids.size()) +
                                       " members; pairwise audit skipped");
      continue;
    }
    double worst = 1.0;
    for (std::size_t i = 0; i < c.member_ids.size(); ++i) {
      for (std::size_t j = i + 1; j < c.member_ids.size(); ++j) {
        worst = std::min(worst, estimate_similarity(signatures[c.member_ids[i]],
                                                    signatures[c.member_ids[j]]));
      }
    }
    if (worst < min_similarity) {
      ++flagged;
      log.warn("cluster_diameter", "cluster " + std::to_string(c.cluster_id) + " (" +
                                       std::to_string(c.member_ids.size()) +
                                       " members) has a pair with estimated similarity " +
                                       std::to_string(worst));
    }
  }
  return flagged;
}

}  // namespace funderlink
