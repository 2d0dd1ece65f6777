#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hrgm/graph.hpp"
#include "hrgm/varalg.hpp"

namespace hrgm {

// Variogram with entries known exactly on the edges of a graph and unknown
// elsewhere (stored as NaN). Every maximal-clique block must be strictly CND
// at construction.
class PartialVariogram {
 public:
  static PartialVariogram from_entries(Graph g, const std::vector<std::tuple<int, int, double>>& entries,
                                       double tol = default_tol());
  // Restriction of a fully known matrix to the edges of g.
  static PartialVariogram from_full(Graph g, const Eigen::MatrixXd& gamma, double tol = default_tol());

  const Graph& graph() const { return g_; }
  double at(int i, int j) const;
  // Full storage with NaN placeholders on nonedges.
  const Eigen::MatrixXd& storage() const { return m_; }
  // Dense block over a vertex set that must be a clique of the graph.
  Eigen::MatrixXd clique_block(const std::vector<int>& verts) const;
  // Induced subproblem on a vertex list (sorted ascending); sub-vertex k
  // corresponds to verts[k-1].
  PartialVariogram restrict_to(const std::vector<int>& verts) const;

 private:
  PartialVariogram() = default;
  Graph g_;
  Eigen::MatrixXd m_;
};

enum class CompletionStatus { Converged, MaxIterations, LeftCone, NoCNDSolution };
const char* to_string(CompletionStatus s);

struct CompletionResult {
  Eigen::MatrixXd gamma;  // completed variogram
  Eigen::MatrixXd theta;  // its signed Laplacian, zero off the edge set
  CompletionStatus status = CompletionStatus::Converged;
  double edge_residual = 0.0;     // max |gamma - data| over edges
  double nonedge_residual = 0.0;  // max |theta| over nonedges
  int iterations = 0;
  std::vector<double> objective_trace;  // nondecreasing for the iterative path
  std::string method;
};

struct CompletionOptions {
  double tol = default_tol();
  int max_iterations = 10000;
  bool use_newton = true;
  // Test hook for the decomposed driver: use this clique separator for the
  // top-level split instead of the canonical smallest one.
  std::optional<std::vector<int>> forced_separator;
};

// Closed-form completion over a clique tree: the completed Laplacian is the
// sum of embedded clique-block Laplacians minus multiplicity-weighted
// separator-block Laplacians. Exact on chordal graphs.
CompletionResult complete_chordal(const PartialVariogram& p, double tol = default_tol());

// Two-clique cover special case; validates the cover and then runs the same
// assembly as complete_chordal, so results agree bit for bit.
CompletionResult complete_two_clique(const PartialVariogram& p, double tol = default_tol());

// Iterative surrogate likelihood maximization over signed Laplacians
// supported on the edge set: maximize log pseudo-determinant plus the pairing
// with the data. Stationarity forces the completed variogram to match the
// data on every edge.
CompletionResult complete_general(const PartialVariogram& p, const CompletionOptions& opts = {});

// Recursive driver: chordal graphs go to the closed form, graphs with a
// clique separator split into the two sides and merge the marginal
// Laplacians, prime non-chordal graphs go to the iterative solver.
CompletionResult complete_decomposed(const PartialVariogram& p, const CompletionOptions& opts = {});

// Dispatcher used by the command line: chordal -> closed form, otherwise the
// decomposed driver.
CompletionResult complete_auto(const PartialVariogram& p, const CompletionOptions& opts = {});

}  // namespace hrgm
