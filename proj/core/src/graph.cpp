#include "hrgm/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "hrgm/errors.hpp"

namespace hrgm {

namespace {

constexpr int kMaskLimit = 64;

std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  if (g.vertex_count() > kMaskLimit)
    fail(errk::TooLarge, "bitmask algorithms support at most 64 vertices, got " +
                             std::to_string(g.vertex_count()));
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
  for (const auto& [i, j] : g.edges()) {
    masks[static_cast<std::size_t>(i)] |= 1ull << (j - 1);
    masks[static_cast<std::size_t>(j)] |= 1ull << (i - 1);
  }
  return masks;
}

}  // namespace

int Graph::idx(int v) const {
  if (v < 1 || v > d_) fail(errk::BadInput, "vertex " + std::to_string(v) + " out of range 1.." + std::to_string(d_));
  return v;
}

Graph Graph::from_edges(int d, std::vector<std::pair<int, int>> edges) {
  if (d < 1) fail(errk::BadInput, "graph needs at least one vertex");
  Graph g;
  g.d_ = d;
  g.adj_.assign(static_cast<std::size_t>(d) + 1, std::vector<bool>(static_cast<std::size_t>(d) + 1, false));
  std::set<std::pair<int, int>> uniq;
  for (auto [i, j] : edges) {
    if (i < 1 || i > d || j < 1 || j > d)
      fail(errk::BadInput, "edge endpoint out of range: (" + std::to_string(i) + "," + std::to_string(j) + ")");
    if (i == j) fail(errk::BadInput, "self loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
    uniq.emplace(i, j);
  }
  g.edges_.assign(uniq.begin(), uniq.end());
  for (const auto& [i, j] : g.edges_) {
    g.adj_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    g.adj_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
  }
  return g;
}

int Graph::degree(int v) const {
  idx(v);
  int c = 0;
  for (int u = 1; u <= d_; ++u) c += adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] ? 1 : 0;
  return c;
}

std::vector<int> Graph::neighbors(int v) const {
  idx(v);
  std::vector<int> out;
  for (int u = 1; u <= d_; ++u)
    if (adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) out.push_back(u);
  return out;
}

bool Graph::connected() const {
  if (d_ == 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(d_) + 1, false);
  std::vector<int> stack = {1};
  seen[1] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 1; u <= d_; ++u) {
      if (adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == d_;
}

bool Graph::complete() const {
  return edge_count() == d_ * (d_ - 1) / 2;
}

Graph Graph::induced(std::vector<int> verts) const {
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty()) fail(errk::BadInput, "induced subgraph needs at least one vertex");
  std::vector<int> pos(static_cast<std::size_t>(d_) + 1, 0);
  for (std::size_t k = 0; k < verts.size(); ++k) pos[static_cast<std::size_t>(idx(verts[k]))] = static_cast<int>(k) + 1;
  std::vector<std::pair<int, int>> sub;
  for (const auto& [i, j] : edges_) {
    const int a = pos[static_cast<std::size_t>(i)];
    const int b = pos[static_cast<std::size_t>(j)];
    if (a > 0 && b > 0) sub.emplace_back(a, b);
  }
  return from_edges(static_cast<int>(verts.size()), std::move(sub));
}

Graph Graph::suspension() const {
  std::vector<std::pair<int, int>> e = edges_;
  for (int v = 1; v <= d_; ++v) e.emplace_back(v, d_ + 1);
  return from_edges(d_ + 1, std::move(e));
}

namespace {

// Maximum cardinality search. Returns the selection order; ties go to the
// smallest label. The reverse of this order is a perfect elimination order
// exactly when the graph is chordal.
std::vector<int> mcs_order(const Graph& g) {
  const int d = g.vertex_count();
  std::vector<int> weight(static_cast<std::size_t>(d) + 1, 0);
  std::vector<bool> picked(static_cast<std::size_t>(d) + 1, false);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(d));
  for (int step = 0; step < d; ++step) {
    int best = -1;
    for (int v = 1; v <= d; ++v)
      if (!picked[static_cast<std::size_t>(v)] && (best == -1 || weight[static_cast<std::size_t>(v)] > weight[static_cast<std::size_t>(best)]))
        best = v;
    picked[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
    for (int u = 1; u <= d; ++u)
      if (!picked[static_cast<std::size_t>(u)] && g.has_edge(best, u)) ++weight[static_cast<std::size_t>(u)];
  }
  return order;
}

// Prior neighborhoods along the MCS order: K[k] = {order[k]} ∪ (neighbors of
// order[k] already selected). The graph is chordal iff each such set is a
// clique (zero fill-in).
std::vector<std::vector<int>> mcs_candidate_cliques(const Graph& g, const std::vector<int>& order) {
  const int d = g.vertex_count();
  std::vector<int> rank(static_cast<std::size_t>(d) + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  std::vector<std::vector<int>> cands;
  cands.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::vector<int> c = {order[k]};
    for (int u = 1; u <= d; ++u)
      if (g.has_edge(order[k], u) && rank[static_cast<std::size_t>(u)] < static_cast<int>(k)) c.push_back(u);
    std::sort(c.begin(), c.end());
    cands.push_back(std::move(c));
  }
  return cands;
}

bool is_clique(const Graph& g, const std::vector<int>& verts) {
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b)
      if (!g.has_edge(verts[a], verts[b])) return false;
  return true;
}

}  // namespace

bool is_chordal(const Graph& g) {
  const auto order = mcs_order(g);
  for (const auto& cand : mcs_candidate_cliques(g, order))
    if (!is_clique(g, cand)) return false;
  return true;
}

ChordalDecomposition chordal_decomposition(const Graph& g) {
  if (!g.connected()) fail(errk::Disconnected, "decompose components separately");
  const auto order = mcs_order(g);
  auto cands = mcs_candidate_cliques(g, order);
  for (const auto& cand : cands)
    if (!is_clique(g, cand)) fail(errk::NotChordal, "graph admits no perfect elimination order");

  // Keep candidates that are maximal; each candidate has a distinct largest
  // MCS rank, so set equality cannot occur.
  auto contains = [](const std::vector<int>& big, const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  ChordalDecomposition out;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    bool maximal = true;
    for (std::size_t l = 0; l < cands.size(); ++l)
      if (l != k && cands[l].size() > cands[k].size() && contains(cands[l], cands[k])) {
        maximal = false;
        break;
      }
    if (maximal) out.cliques.push_back(cands[k]);  // discovery order inherited from MCS
  }

  // Separators from the running intersection property.
  std::map<std::vector<int>, int> seps;
  std::vector<bool> covered(static_cast<std::size_t>(g.vertex_count()) + 1, false);
  for (int v : out.cliques.front()) covered[static_cast<std::size_t>(v)] = true;
  for (std::size_t j = 1; j < out.cliques.size(); ++j) {
    std::vector<int> s;
    for (int v : out.cliques[j])
      if (covered[static_cast<std::size_t>(v)]) s.push_back(v);
    bool inside_one = false;
    for (std::size_t i = 0; i < j; ++i)
      if (contains(out.cliques[i], s)) {
        inside_one = true;
        break;
      }
    if (!inside_one) fail(errk::NotChordal, "clique sequence violates the running intersection property");
    ++seps[s];
    for (int v : out.cliques[j]) covered[static_cast<std::size_t>(v)] = true;
  }
  out.separators.assign(seps.begin(), seps.end());
  return out;
}

int clique_number(const Graph& g) {
  const auto adj = adjacency_masks(g);
  const int d = g.vertex_count();
  int best = 0;
  std::function<void(std::uint64_t, int)> expand = [&](std::uint64_t pool, int size) {
    if (pool == 0) {
      best = std::max(best, size);
      return;
    }
    if (size + std::popcount(pool) <= best) return;
    // Pivot on the pool vertex with the most pool neighbors.
    int pivot = -1, pivot_nb = -1;
    for (std::uint64_t p = pool; p;) {
      const int v = std::countr_zero(p);
      p &= p - 1;
      const int nb = std::popcount(pool & adj[static_cast<std::size_t>(v) + 1]);
      if (nb > pivot_nb) {
        pivot_nb = nb;
        pivot = v;
      }
    }
    std::uint64_t branch = pool & ~adj[static_cast<std::size_t>(pivot) + 1];
    while (branch) {
      if (size + std::popcount(pool) <= best) return;
      const int v = std::countr_zero(branch);
      expand(pool & adj[static_cast<std::size_t>(v) + 1], size + 1);
      pool &= ~(1ull << v);
      branch &= branch - 1;
    }
  };
  expand(d == kMaskLimit ? ~0ull : (1ull << d) - 1, 0);
  return best;
}

std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
  const auto adj = adjacency_masks(g);
  const int d = g.vertex_count();
  std::vector<std::vector<int>> found;
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> bk =
      [&](std::uint64_t r, std::uint64_t p, std::uint64_t x) {
        if (p == 0 && x == 0) {
          std::vector<int> clique;
          for (std::uint64_t m = r; m;) {
            clique.push_back(std::countr_zero(m) + 1);
            m &= m - 1;
          }
          found.push_back(std::move(clique));
          return;
        }
        int pivot = -1, pivot_nb = -1;
        for (std::uint64_t m = p | x; m;) {
          const int v = std::countr_zero(m);
          m &= m - 1;
          const int nb = std::popcount(p & adj[static_cast<std::size_t>(v) + 1]);
          if (nb > pivot_nb) {
            pivot_nb = nb;
            pivot = v;
          }
        }
        std::uint64_t branch = p & ~adj[static_cast<std::size_t>(pivot) + 1];
        while (branch) {
          const int v = std::countr_zero(branch);
          branch &= branch - 1;
          const std::uint64_t bit = 1ull << v;
          bk(r | bit, p & adj[static_cast<std::size_t>(v) + 1], x & adj[static_cast<std::size_t>(v) + 1]);
          p &= ~bit;
          x |= bit;
        }
      };
  bk(0, d == kMaskLimit ? ~0ull : (1ull << d) - 1, 0);
  std::sort(found.begin(), found.end());
  return found;
}

namespace {

// Vertices outside done ∪ {v} that are adjacent to v or connected to v
// through eliminated vertices (members of done). This is v's degree at
// elimination time after done has been eliminated.
int elimination_degree(const std::vector<std::uint32_t>& adj, std::uint32_t done, int v) {
  std::uint32_t reach = adj[static_cast<std::size_t>(v)];
  std::uint32_t frontier = reach & done;
  std::uint32_t expanded = 0;
  while (frontier) {
    const int u = std::countr_zero(frontier);
    frontier &= frontier - 1;
    expanded |= 1u << u;
    const std::uint32_t nb = adj[static_cast<std::size_t>(u)];
    frontier |= (nb & done) & ~expanded;
    reach |= nb;
  }
  return std::popcount(reach & ~done & ~(1u << v));
}

}  // namespace

MinFillResult min_fill_cover(const Graph& g) {
  const int d = g.vertex_count();
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(d) + 1, std::vector<bool>(static_cast<std::size_t>(d) + 1, false));
  for (const auto& [i, j] : g.edges()) {
    adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
  }
  std::vector<bool> gone(static_cast<std::size_t>(d) + 1, false);
  std::vector<std::pair<int, int>> fill;
  MinFillResult res;
  res.width = 0;
  for (int step = 0; step < d; ++step) {
    int best = -1, best_fill = -1, best_deg = -1;
    for (int v = 1; v <= d; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      std::vector<int> nbrs;
      for (int u = 1; u <= d; ++u)
        if (!gone[static_cast<std::size_t>(u)] && adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) nbrs.push_back(u);
      int missing = 0;
      for (std::size_t a = 0; a < nbrs.size(); ++a)
        for (std::size_t b = a + 1; b < nbrs.size(); ++b)
          if (!adj[static_cast<std::size_t>(nbrs[a])][static_cast<std::size_t>(nbrs[b])]) ++missing;
      if (best == -1 || missing < best_fill) {
        best = v;
        best_fill = missing;
        best_deg = static_cast<int>(nbrs.size());
      }
    }
    res.order.push_back(best);
    res.width = std::max(res.width, best_deg);
    std::vector<int> nbrs;
    for (int u = 1; u <= d; ++u)
      if (!gone[static_cast<std::size_t>(u)] && adj[static_cast<std::size_t>(best)][static_cast<std::size_t>(u)]) nbrs.push_back(u);
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        if (!adj[static_cast<std::size_t>(nbrs[a])][static_cast<std::size_t>(nbrs[b])]) {
          adj[static_cast<std::size_t>(nbrs[a])][static_cast<std::size_t>(nbrs[b])] = true;
          adj[static_cast<std::size_t>(nbrs[b])][static_cast<std::size_t>(nbrs[a])] = true;
          fill.emplace_back(nbrs[a], nbrs[b]);
        }
    gone[static_cast<std::size_t>(best)] = true;
  }
  auto all_edges = g.edges();
  all_edges.insert(all_edges.end(), fill.begin(), fill.end());
  res.filled = Graph::from_edges(d, std::move(all_edges));
  return res;
}

TreewidthResult treewidth(const Graph& g, bool allow_heuristic, int exact_cap) {
  const int d = g.vertex_count();
  if (d > exact_cap || d > 30) {
    if (!allow_heuristic)
      fail(errk::TooLarge, "exact treewidth capped at " + std::to_string(exact_cap) + " vertices");
    return {min_fill_cover(g).width, TreewidthMode::MinFillHeuristic};
  }
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(d) + 1, 0);
  for (const auto& [i, j] : g.edges()) {
    adj[static_cast<std::size_t>(i)] |= 1u << (j - 1);
    adj[static_cast<std::size_t>(j)] |= 1u << (i - 1);
  }
  // adj indexed 0-based below.
  std::vector<std::uint32_t> adj0(static_cast<std::size_t>(d), 0);
  for (int v = 1; v <= d; ++v) adj0[static_cast<std::size_t>(v - 1)] = adj[static_cast<std::size_t>(v)];
  const std::uint32_t full = (d == 32) ? ~0u : ((1u << d) - 1);
  std::vector<std::int8_t> dp(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = 127;
    for (std::uint32_t m = s; m;) {
      const int v = std::countr_zero(m);
      m &= m - 1;
      const std::uint32_t rest = s & ~(1u << v);
      const int w = std::max<int>(dp[rest], elimination_degree(adj0, rest, v));
      best = std::min(best, w);
    }
    dp[s] = static_cast<std::int8_t>(best);
  }
  return {dp[full], TreewidthMode::Exact};
}

std::vector<std::vector<int>> components_without(const Graph& g, const std::vector<int>& removed) {
  const int d = g.vertex_count();
  std::vector<bool> out(static_cast<std::size_t>(d) + 1, false);
  for (int v : removed) out[static_cast<std::size_t>(v)] = true;
  std::vector<bool> seen(static_cast<std::size_t>(d) + 1, false);
  std::vector<std::vector<int>> comps;
  for (int s = 1; s <= d; ++s) {
    if (out[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp, stack = {s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u = 1; u <= d; ++u)
        if (!out[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)] && g.has_edge(v, u)) {
          seen[static_cast<std::size_t>(u)] = true;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

namespace {

// All cliques of the given size in lexicographic order.
void cliques_of_size(const Graph& g, int size, std::vector<int>& prefix, int start,
                     const std::function<bool(const std::vector<int>&)>& visit, bool& stop) {
  if (stop) return;
  if (static_cast<int>(prefix.size()) == size) {
    if (visit(prefix)) stop = true;
    return;
  }
  for (int v = start; v <= g.vertex_count(); ++v) {
    bool ok = true;
    for (int u : prefix)
      if (!g.has_edge(u, v)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    prefix.push_back(v);
    cliques_of_size(g, size, prefix, v + 1, visit, stop);
    prefix.pop_back();
    if (stop) return;
  }
}

}  // namespace

std::optional<SeparatorSplit> split_at_clique_separator(const Graph& g) {
  if (!g.connected()) fail(errk::Disconnected, "separator search expects a connected graph");
  if (g.complete()) return std::nullopt;
  const int d = g.vertex_count();
  std::optional<SeparatorSplit> result;
  for (int size = 1; size <= d - 2 && !result; ++size) {
    std::vector<int> prefix;
    bool stop = false;
    cliques_of_size(g, size, prefix, 1,
                    [&](const std::vector<int>& c) {
                      auto comps = components_without(g, c);
                      if (comps.size() < 2) return false;
                      SeparatorSplit split;
                      split.separator = c;
                      split.a_side = comps.front();
                      for (std::size_t k = 1; k < comps.size(); ++k)
                        split.b_side.insert(split.b_side.end(), comps[k].begin(), comps[k].end());
                      split.a_side.insert(split.a_side.end(), c.begin(), c.end());
                      split.b_side.insert(split.b_side.end(), c.begin(), c.end());
                      std::sort(split.a_side.begin(), split.a_side.end());
                      std::sort(split.b_side.begin(), split.b_side.end());
                      result = std::move(split);
                      return true;
                    },
                    stop);
  }
  return result;
}

Graph path_graph(int d) {
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < d; ++v) e.emplace_back(v, v + 1);
  return Graph::from_edges(d, std::move(e));
}

Graph cycle_graph(int d) {
  if (d < 3) fail(errk::BadInput, "cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < d; ++v) e.emplace_back(v, v + 1);
  e.emplace_back(1, d);
  return Graph::from_edges(d, std::move(e));
}

Graph complete_graph(int d) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j) e.emplace_back(i, j);
  return Graph::from_edges(d, std::move(e));
}

Graph complete_bipartite_2n(int n) {
  if (n < 1) fail(errk::BadInput, "bipartite part must be nonempty");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= n; ++i) {
    e.emplace_back(i, n + 1);
    e.emplace_back(i, n + 2);
  }
  return Graph::from_edges(n + 2, std::move(e));
}

bool is_cycle_graph(const Graph& g) {
  const int d = g.vertex_count();
  if (d < 3 || g.edge_count() != d || !g.connected()) return false;
  for (int v = 1; v <= d; ++v)
    if (g.degree(v) != 2) return false;
  return true;
}

std::optional<int> complete_bipartite_2n_size(const Graph& g) {
  const int d = g.vertex_count();
  if (!g.connected() || d < 3) return std::nullopt;
  std::vector<int> color(static_cast<std::size_t>(d) + 1, -1);
  std::vector<int> stack = {1};
  color[1] = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(v)) {
      if (color[static_cast<std::size_t>(u)] == -1) {
        color[static_cast<std::size_t>(u)] = 1 - color[static_cast<std::size_t>(v)];
        stack.push_back(u);
      } else if (color[static_cast<std::size_t>(u)] == color[static_cast<std::size_t>(v)]) {
        return std::nullopt;
      }
    }
  }
  int n0 = 0, n1 = 0;
  for (int v = 1; v <= d; ++v) (color[static_cast<std::size_t>(v)] == 0 ? n0 : n1)++;
  if (g.edge_count() != n0 * n1) return std::nullopt;  // not complete bipartite
  if (n0 == 2) return n1;
  if (n1 == 2) return n0;
  return std::nullopt;
}

std::optional<int> universal_vertex(const Graph& g) {
  for (int v = 1; v <= g.vertex_count(); ++v)
    if (g.degree(v) == g.vertex_count() - 1) return v;
  return std::nullopt;
}

}  // namespace hrgm
