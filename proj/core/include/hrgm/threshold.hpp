#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hrgm/graph.hpp"
#include "hrgm/varalg.hpp"

namespace hrgm {

// Bracket for the number of samples at which the surrogate MLE starts to
// exist almost surely: clique number minus one from below, treewidth from
// above.
struct ThresholdBounds {
  int lower = 0;
  int upper = 0;
  bool exact = false;          // lower == upper with a certified upper bound
  bool upper_is_exact = true;  // false when treewidth came from the min-fill heuristic
  std::string evidence;
};
ThresholdBounds emlt_bounds(const Graph& g, bool allow_heuristic = true, int exact_cap = 20);

// Jacobian rank probe for the edge-restricted variogram map at r samples.
// Rows of B (r x d, centered) parametrize rank-r Gram matrices; the map sends
// B to the squared column distances on the edges. Full row rank #E at every
// trial means no polynomial obstruction on the observed entries at that
// sample count; a rank deficit at every trial certifies that an obstruction
// exists.
enum class SurrogateVerdict { ZeroIdealLikely, NotZero, Inconclusive };
const char* to_string(SurrogateVerdict v);

struct SurrogateReport {
  SurrogateVerdict verdict = SurrogateVerdict::Inconclusive;
  int r = 0;
  int trials = 0;
  int full_rank_trials = 0;
  int max_rank = 0;
  int edge_count = 0;
};
SurrogateReport elimination_surrogate(const Graph& g, int r, int trials, std::uint64_t seed, double tol = 1e-9);

// Rank-one data on the bipartite four-cycle with parts {1, 2} and {3, 4}:
// the variogram of a single centered sample observed on the four edges. The
// two missing entries are forced by algebra up to a cubic in the {3,4} entry;
// each real root either lifts to a model point or certifies that none exists.
enum class C4Outcome { ExistsCND, NoCNDSolution };
const char* to_string(C4Outcome v);

struct C4Candidate {
  double g12 = 0.0;  // forced entry between vertices 1 and 2
  double g34 = 0.0;  // real root for the entry between vertices 3 and 4
  bool strictly_cnd = false;
  double margin = 0.0;  // certificate margin of the completed matrix
};

struct C4ExperimentResult {
  Eigen::Vector4d sample = Eigen::Vector4d::Zero();
  Eigen::MatrixXd observed;  // 4 x 4, data on the edges, zero elsewhere
  int polynomial_degree = 0;
  std::vector<C4Candidate> candidates;  // real roots, ascending in g34
  C4Outcome outcome = C4Outcome::NoCNDSolution;
};

// sample (1, x2, x3, -(1 + x2 + x3)) is centered by construction.
C4ExperimentResult cycle4_rank1_experiment(double x2, double x3, double tol = default_tol());
C4ExperimentResult cycle4_rank1_experiment(const Eigen::Vector4d& centered, double tol = default_tol());

}  // namespace hrgm
