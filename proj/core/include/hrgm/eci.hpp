#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hrgm/graph.hpp"
#include "hrgm/varalg.hpp"

namespace hrgm {

// Extremal conditional independence statement A ⟂ B | C. A and B must be
// nonempty; A, B, C pairwise disjoint; vertices 1-based.
struct CIStatement {
  std::vector<int> a, b, c;
};
void check_statement(const CIStatement& s, int d);

// Rank test: the statement holds iff the bordered block
// [[-Γ_{A∪C,B∪C}/2, 1],[1ᵀ,0]] has rank #C + 1. margin is the largest
// singular value that the statement requires to vanish, relative to the top
// singular value.
struct EciResult {
  bool holds = false;
  int rank = 0;
  int expected_rank = 0;
  Eigen::VectorXd singular_values;
  double margin = 0.0;
};
EciResult test_eci(const Eigen::MatrixXd& gamma, const CIStatement& s, double tol = default_tol());

// Saturated pair test {i} ⟂ {j} | rest via the Laplacian entry.
bool saturated_pair(const Eigen::MatrixXd& gamma, int i, int j, double tol = default_tol());

// All statements (K_a, K_b, C) where C ranges over vertex subsets whose
// removal disconnects g and K_a, K_b are distinct components of g - C.
// Throws SizeCap when the graph has more than size_cap vertices.
std::vector<CIStatement> separation_statements(const Graph& g, int size_cap = 10);

// Determinantal generators attached to a statement: one atom per pair
// (A', B') with A' ⊆ A∪C, B' ⊆ B∪C, #A' = #B' = #C+1. The atom value is
// det [[-Γ_{A',B'}/2, 1],[1ᵀ,0]].
struct GeneratorAtom {
  std::vector<int> rows, cols;
};
std::vector<GeneratorAtom> generator_atoms(const CIStatement& s);

// Atom values normalized by the largest absolute same-size minor of
// cm_matrix(gamma), which makes the vanishing test scale-free.
struct AtomEvaluation {
  std::vector<double> values;
  std::vector<double> normalized;
  double scale = 0.0;
  double max_normalized = 0.0;
};
AtomEvaluation evaluate_atoms(const Eigen::MatrixXd& gamma, const std::vector<GeneratorAtom>& atoms);

// Residuals of the two determinant expansion identities used by the
// generator construction: det(M) = Σ_j m_{1j} D_j with D_j the determinant
// of M with column j replaced by ones, and D_j = Σ_i m_{ix} D_{ij} for every
// x ≠ j, where D_{ij} additionally replaces row i by ones and zeroes the
// (i,j) entry.
struct ExpansionResiduals {
  double first_row = 0.0;       // det(M) vs Σ_j m_{1j} D_j
  double column_family = 0.0;  // worst |D_j - Σ_i m_{ix} D_{ij}| over (j, x)
};
ExpansionResiduals det_expansion_check(const Eigen::MatrixXd& m);

// Degree-5 polynomial in the entries of an 8-vertex variogram that vanishes
// on the model of the suspension of K_{5,2} ∪ {(6,7)} but is not generated by
// the separation statements of that graph. normalized = |value| / max term.
struct PentadResult {
  double value = 0.0;
  double scale = 0.0;
  double normalized = 0.0;
};
PentadResult pentad_residual(const Eigen::MatrixXd& gamma);

// The 8-vertex graph on which the pentad certificate lives: complete
// bipartite {1..5} x {6,7}, edge (6,7), vertex 8 adjacent to everything.
Graph pentad_model_graph();

}  // namespace hrgm
