#include "spinbath/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "spinbath/errors.hpp"

namespace spinbath {

double default_cutoff(double lattice_constant) {
  return std::sqrt(11.0) * lattice_constant / 4.0;
}

std::size_t NeighborGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

NeighborGraph build_neighbor_graph(const BathRealization& bath, double cutoff) {
  if (cutoff <= 0.0) throw ConfigError("neighbor cutoff must be > 0");
  const auto& spins = bath.spins;
  const int n = static_cast<int>(spins.size());
  NeighborGraph graph;
  graph.cutoff = cutoff;
  graph.adjacency.assign(n, {});
  if (n == 0) return graph;

  // Bin spins into cells of the cutoff size; only neighboring cells can hold
  // partners.
  Eigen::Vector3d lo = spins[0].position;
  for (const auto& s : spins) lo = lo.cwiseMin(s.position);
  auto cell_of = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector3i(static_cast<int>((p[0] - lo[0]) / cutoff),
                           static_cast<int>((p[1] - lo[1]) / cutoff),
                           static_cast<int>((p[2] - lo[2]) / cutoff));
  };
  std::map<std::tuple<int, int, int>, std::vector<int>> cells;
  for (int i = 0; i < n; ++i) {
    const auto c = cell_of(spins[i].position);
    cells[{c[0], c[1], c[2]}].push_back(i);
  }
  const double cut2 = cutoff * cutoff;
  for (int i = 0; i < n; ++i) {
    const auto c = cell_of(spins[i].position);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          const auto it = cells.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            // Inclusive boundary: spins at exactly the cutoff are neighbors.
            if ((spins[i].position - spins[j].position).squaredNorm() <= cut2) {
              graph.adjacency[i].push_back(j);
              graph.adjacency[j].push_back(i);
            }
          }
        }
  }
  for (auto& nbrs : graph.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return graph;
}

std::vector<std::vector<Cluster>> enumerate_clusters(const NeighborGraph& graph, int k_max) {
  if (k_max < 2 || k_max > 5) throw ConfigError("k_max must be in [2, 5]");
  std::vector<std::vector<Cluster>> per_size(static_cast<std::size_t>(k_max) + 1);

  auto& pairs = per_size[2];
  for (int i = 0; i < static_cast<int>(graph.adjacency.size()); ++i)
    for (int j : graph.adjacency[i])
      if (j > i) pairs.push_back({i, j});
  std::sort(pairs.begin(), pairs.end());

  for (int k = 3; k <= k_max; ++k) {
    auto& grown = per_size[static_cast<std::size_t>(k)];
    for (const auto& base : per_size[static_cast<std::size_t>(k - 1)]) {
      for (int member : base) {
        for (int candidate : graph.adjacency[member]) {
          if (std::binary_search(base.begin(), base.end(), candidate)) continue;
          Cluster next = base;
          next.insert(std::upper_bound(next.begin(), next.end(), candidate), candidate);
          grown.push_back(std::move(next));
        }
      }
    }
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
  }
  return per_size;
}

std::string clusters_to_csv(const std::vector<std::vector<Cluster>>& per_size) {
  std::ostringstream out;
  out << "size,members\n";
  for (const auto& list : per_size)
    for (const auto& cluster : list) {
      out << cluster.size() << ",";
      for (std::size_t i = 0; i < cluster.size(); ++i)
        out << cluster[i] << (i + 1 < cluster.size() ? " " : "");
      out << "\n";
    }
  return out.str();
}

}  // namespace spinbath
