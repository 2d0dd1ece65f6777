#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace hrgm {

// Simple undirected graph on vertices 1..d. Edges are stored as sorted (i, j)
// pairs with i < j; the adjacency matrix is kept alongside for O(1) queries.
class Graph {
 public:
  Graph() = default;
  static Graph from_edges(int d, std::vector<std::pair<int, int>> edges);

  int vertex_count() const { return d_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int i, int j) const { return adj_[idx(i)][idx(j)]; }
  int degree(int v) const;
  std::vector<int> neighbors(int v) const;

  bool connected() const;
  bool complete() const;

  // Induced subgraph on the (sorted, deduplicated) vertex list; vertex k of
  // the result corresponds to verts[k-1].
  Graph induced(std::vector<int> verts) const;

  // New graph on d+1 vertices where vertex d+1 is adjacent to all others.
  Graph suspension() const;

 private:
  int idx(int v) const;
  int d_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<bool>> adj_;
};

bool is_chordal(const Graph& g);

// Maximal cliques and the separators of a clique tree, in maximum cardinality
// search discovery order (smallest label breaks ties). The sequence satisfies
// the running intersection property; separator multiplicities sum to
// (#cliques - 1).
struct ChordalDecomposition {
  std::vector<std::vector<int>> cliques;
  std::vector<std::pair<std::vector<int>, int>> separators;  // (S, multiplicity)
};
ChordalDecomposition chordal_decomposition(const Graph& g);

// Exact maximum clique size (branch and bound, adjacency bitmasks, d <= 64).
int clique_number(const Graph& g);

// All maximal cliques (Bron-Kerbosch with pivoting, d <= 64), each sorted,
// listed in lexicographic order.
std::vector<std::vector<int>> maximal_cliques(const Graph& g);

enum class TreewidthMode { Exact, MinFillHeuristic };
struct TreewidthResult {
  int width = 0;
  TreewidthMode mode = TreewidthMode::Exact;
};
// Exact subset-DP treewidth up to exact_cap vertices; beyond that, the
// min-fill elimination upper bound when allow_heuristic is set, otherwise
// TooLarge.
TreewidthResult treewidth(const Graph& g, bool allow_heuristic = true, int exact_cap = 20);

// Min-fill elimination: returns the chordal supergraph (original edges plus
// fill) and the elimination order that produced it.
struct MinFillResult {
  Graph filled;
  std::vector<int> order;
  int width = 0;
};
MinFillResult min_fill_cover(const Graph& g);

// One split along a clique separator: vertex lists of the two sides including
// the separator, plus the separator itself. The separator chosen is the
// clique separator of smallest cardinality, lexicographically smallest vertex
// list on ties; the A side is the component containing the smallest
// non-separator vertex, the B side the union of the remaining components.
// Empty optional when the graph has no clique separator.
struct SeparatorSplit {
  std::vector<int> a_side;     // A ∪ C, sorted
  std::vector<int> b_side;     // B ∪ C, sorted
  std::vector<int> separator;  // C, sorted
};
std::optional<SeparatorSplit> split_at_clique_separator(const Graph& g);

// Connected components of g with the given vertices removed; each component
// sorted ascending, components sorted lexicographically.
std::vector<std::vector<int>> components_without(const Graph& g, const std::vector<int>& removed);

// Named constructions used throughout the tests and tools.
Graph path_graph(int d);
Graph cycle_graph(int d);
Graph complete_graph(int d);
Graph complete_bipartite_2n(int n);  // parts {1..n} and {n+1, n+2}

bool is_cycle_graph(const Graph& g);
// If g is K_{2,n} for some n >= 1 (any labeling), returns n.
std::optional<int> complete_bipartite_2n_size(const Graph& g);
// Vertex adjacent to all others, if any (smallest such), else nullopt.
std::optional<int> universal_vertex(const Graph& g);

}  // namespace hrgm
