#pragma once

#include <cstddef>
#include <vector>

namespace dynlab {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Strongly connected components (iterative Tarjan). Returns a component id per
/// vertex; ids are assigned in reverse topological order of the condensation.
std::vector<int> strongly_connected_components(const Adjacency& adj, int& count);

/// Vertices reachable from `start` (including start).
std::vector<char> reachable_from(const Adjacency& adj, std::size_t start);

/// Shortest path start -> goal as a vertex list; empty if unreachable.
std::vector<std::size_t> shortest_path(const Adjacency& adj, std::size_t start, std::size_t goal);

}  // namespace dynlab
