#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "funderlink/audit_log.hpp"
#include "funderlink/minhash.hpp"

namespace funderlink {

struct Edge {
  std::uint32_t a = 0;  // a < b
  std::uint32_t b = 0;
  auto operator<=>(const Edge&) const = default;
};

struct Cluster {
  std::uint32_t cluster_id = 0;
  std::vector<std::uint32_t> member_ids;  // ascending
  std::uint32_t representative_id = 0;    // highest count, ties to smallest id
};

// Undirected, deduplicated, self-loop free edges (i, j) where j is an LSH
// candidate of i and the estimated similarity is at least `threshold`. Nodes
// are signature positions; sorted output.
std::vector<Edge> build_similarity_graph(std::span<const MinHashSignature> signatures,
                                         const LshIndex& lsh, double threshold,
                                         unsigned workers = 1);

// Union-find components over nodes [0, n). Isolated nodes become singletons.
// Clusters are ordered by smallest member and numbered in that order. Throws
// std::out_of_range for an edge endpoint >= n.
std::vector<Cluster> connected_components(std::span<const Edge> edges, std::size_t n,
                                          std::span<const std::uint64_t> counts = {});

// Warns about clusters holding a pair whose estimated similarity falls below
// `min_similarity` (transitive chaining). Clusters larger than `max_members`
// are skipped with a note. Returns the number of clusters flagged.
std::size_t audit_cluster_diameter(std::span<const Cluster> clusters,
                                   std::span<const MinHashSignature> signatures, AuditLog& log,
                                   double min_similarity = 0.8, std::size_t max_members = 2000);

}  // namespace funderlink
