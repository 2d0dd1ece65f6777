#pragma once

// Brute-force reference implementations used only by the tests. Everything
// here trades speed for being obviously correct and independent of the
// library's linear algebra paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "hrgm/graph.hpp"
#include "hrgm/rng.hpp"

namespace oracle {

// Determinant by the Leibniz permutation sum; usable up to n = 9 or so.
inline double det_leibniz(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double det = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double prod = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) prod *= m(i, perm[i]);
    det += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// Gauss-Jordan inverse with partial pivoting.
inline Eigen::MatrixXd inverse_gauss_jordan(Eigen::MatrixXd m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    m.row(col).swap(m.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    const double p = m(col, col);
    m.row(col) /= p;
    inv.row(col) /= p;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m(r, col);
      m.row(r) -= f * m.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

// Rank by row reduction with partial pivoting.
inline int rank_row_reduce(Eigen::MatrixXd m, double tol = 1e-10) {
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = rank;
    for (int r = rank + 1; r < rows; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (std::abs(m(pivot, col)) <= tol * scale) continue;
    m.row(rank).swap(m.row(pivot));
    for (int r = rank + 1; r < rows; ++r) m.row(r) -= m(r, col) / m(rank, col) * m.row(rank);
    ++rank;
  }
  return rank;
}

// Strict conditional negative definiteness via Sylvester's criterion on the
// covariance mapping based at the last vertex: all leading principal minors
// of the (d-1) x (d-1) matrix (gamma_id + gamma_jd - gamma_ij)/2 positive.
inline bool strictly_cnd_sylvester(const Eigen::MatrixXd& gamma) {
  const int d = static_cast<int>(gamma.rows());
  Eigen::MatrixXd s(d - 1, d - 1);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j) s(i, j) = 0.5 * (gamma(i, d - 1) + gamma(j, d - 1) - gamma(i, j));
  for (int k = 1; k <= d - 1; ++k)
    if (det_leibniz(s.topLeftCorner(k, k)) <= 0.0) return false;
  return true;
}

// Exact treewidth by trying every elimination order; d <= 8.
inline int treewidth_bruteforce(const hrgm::Graph& g) {
  const int d = g.vertex_count();
  std::vector<std::uint32_t> base(d, 0);
  for (const auto& [i, j] : g.edges()) {
    base[i - 1] |= 1u << (j - 1);
    base[j - 1] |= 1u << (i - 1);
  }
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  int best = d - 1;
  do {
    std::vector<std::uint32_t> adj = base;
    std::uint32_t alive = (1u << d) - 1;
    int width = 0;
    for (int v : order) {
      const std::uint32_t nb = adj[v] & alive & ~(1u << v);
      width = std::max(width, __builtin_popcount(nb));
      if (width >= best) break;
      // Connect the eliminated vertex's surviving neighbours.
      for (int u = 0; u < d; ++u)
        if (nb & (1u << u)) adj[u] |= nb;
      alive &= ~(1u << v);
    }
    best = std::min(best, width);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Chordality by greedy simplicial elimination, which succeeds exactly on
// chordal graphs.
inline bool chordal_bruteforce(const hrgm::Graph& g) {
  const int d = g.vertex_count();
  std::vector<std::uint64_t> adj(d, 0);
  for (const auto& [i, j] : g.edges()) {
    adj[i - 1] |= 1ull << (j - 1);
    adj[j - 1] |= 1ull << (i - 1);
  }
  std::uint64_t alive = (d == 64) ? ~0ull : ((1ull << d) - 1);
  for (int step = 0; step < d; ++step) {
    bool found = false;
    for (int v = 0; v < d && !found; ++v) {
      if (!(alive & (1ull << v))) continue;
      const std::uint64_t nb = adj[v] & alive & ~(1ull << v);
      bool simplicial = true;
      for (int u = 0; u < d && simplicial; ++u)
        if (nb & (1ull << u)) simplicial = (nb & ~adj[u] & ~(1ull << u)) == 0;
      if (simplicial) {
        alive &= ~(1ull << v);
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Maximum clique by subset enumeration; d <= 20.
inline int clique_number_bruteforce(const hrgm::Graph& g) {
  const int d = g.vertex_count();
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size <= best) continue;
    bool clique = true;
    for (int i = 0; i < d && clique; ++i)
      for (int j = i + 1; j < d && clique; ++j)
        if ((mask & (1u << i)) && (mask & (1u << j)) && !g.has_edge(i + 1, j + 1)) clique = false;
    if (clique) best = size;
  }
  return best;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib])
      ++ia;
    else
      ++ib;
    d = std::max(d, std::abs(ia / na - ib / nb));
  }
  return d;
}

// One-sample KS statistic against a cdf.
inline double ks_statistic(std::vector<double> a, const std::function<double(double)>& cdf) {
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::max(std::abs((i + 1) / n - f), std::abs(i / n - f)));
  }
  return d;
}

// Composite Simpson rule; n is halved-interval count and made even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Central-difference gradient.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                   double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd hi = x, lo = x;
    hi(i) += h;
    lo(i) -= h;
    g(i) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

// Variogram of a generic full-rank point configuration.
inline Eigen::MatrixXd random_strict_cnd(int d, hrgm::CounterRng& rng) {
  Eigen::MatrixXd b(d - 1, d);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = rng.normal();
  Eigen::MatrixXd gamma(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gamma(i, j) = (b.col(i) - b.col(j)).squaredNorm();
  return gamma;
}

// Random connected graph: a random spanning chain plus independent edges.
inline hrgm::Graph random_connected_graph(int d, hrgm::CounterRng& rng, double edge_prob = 0.4) {
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 1);
  for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[static_cast<int>(rng.below(i + 1))]);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < d; ++i)
    edges.emplace_back(std::min(perm[i], perm[i + 1]), std::max(perm[i], perm[i + 1]));
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      if (rng.uniform() < edge_prob) edges.emplace_back(i, j);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return hrgm::Graph::from_edges(d, edges);
}

// Random connected chordal graph built vertex by vertex: each new vertex
// attaches to a nonempty clique inside the neighbourhood of an earlier
// vertex, which preserves a perfect elimination order by construction.
inline hrgm::Graph random_chordal_graph(int d, hrgm::CounterRng& rng) {
  std::vector<std::vector<int>> adj(d + 1);
  std::vector<std::pair<int, int>> edges;
  auto connect = [&](int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
    edges.emplace_back(std::min(u, v), std::max(u, v));
  };
  for (int v = 2; v <= d; ++v) {
    const int host = 1 + static_cast<int>(rng.below(v - 1));
    // Grow a clique: the host plus a random subset of its earlier neighbours
    // that stays a clique.
    std::vector<int> clique{host};
    for (int u : adj[host]) {
      if (u >= v) continue;
      if (rng.uniform() >= 0.5) continue;
      bool ok = true;
      for (int w : clique)
        if (w != host && std::find(adj[u].begin(), adj[u].end(), w) == adj[u].end()) ok = false;
      if (ok) clique.push_back(u);
    }
    for (int u : clique) connect(u, v);
  }
  std::sort(edges.begin(), edges.end());
  return hrgm::Graph::from_edges(d, edges);
}

}  // namespace oracle
