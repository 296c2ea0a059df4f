#pragma once

#include <string>
#include <vector>

#include "spinbath/bath.hpp"

namespace spinbath {

// A cluster is a sorted set of bath-spin indices, connected under the cutoff
// graph, of size 2..5.
using Cluster = std::vector<int>;

struct NeighborGraph {
  double cutoff = 0.0;                       // angstrom, inclusive boundary
  std::vector<std::vector<int>> adjacency;   // sorted neighbor lists
  std::size_t edge_count() const;
};

// Undirected graph with an edge wherever |r_a - r_b| <= cutoff.  Built with a
// cell grid, O(n) for physical densities.
NeighborGraph build_neighbor_graph(const BathRealization& bath, double cutoff);

// The constructive enumeration: size-2 clusters are the edges; a size-(k+1)
// cluster is a size-k cluster plus any spin adjacent to at least one member.
// Duplicates removed, members sorted, lists in lexicographic order.
// k_max must be in [2, 5].  clusters[k] holds the size-k list (k = 2..k_max).
std::vector<std::vector<Cluster>> enumerate_clusters(const NeighborGraph& graph, int k_max);

// CSV of member indices, one cluster per row, for audit.
std::string clusters_to_csv(const std::vector<std::vector<Cluster>>& per_size);

// sqrt(11) a0 / 4, the dipolar cutoff used throughout.
double default_cutoff(double lattice_constant);

}  // namespace spinbath
