#include "hrgm/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hrgm/degree.hpp"
#include "hrgm/errors.hpp"
#include "hrgm/rng.hpp"

namespace hrgm {

ThresholdBounds emlt_bounds(const Graph& g, bool allow_heuristic, int exact_cap) {
  if (!g.connected()) fail(errk::Disconnected, "threshold bracketing expects a connected graph");
  if (g.complete()) fail(errk::CompleteGraph, "threshold bracketing expects a missing edge");
  ThresholdBounds b;
  b.lower = clique_number(g) - 1;
  TreewidthResult tw = treewidth(g, allow_heuristic, exact_cap);
  b.upper = tw.width;
  b.upper_is_exact = tw.mode == TreewidthMode::Exact;
  b.exact = b.upper_is_exact && b.lower == b.upper;
  std::ostringstream os;
  os << "clique number " << (b.lower + 1) << " forces at least " << b.lower << " samples; treewidth "
     << b.upper << (b.upper_is_exact ? " (exact)" : " (min-fill bound)") << " suffices";
  b.evidence = os.str();
  return b;
}

const char* to_string(SurrogateVerdict v) {
  switch (v) {
    case SurrogateVerdict::ZeroIdealLikely: return "zero-ideal-likely";
    case SurrogateVerdict::NotZero: return "not-zero";
    case SurrogateVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

SurrogateReport elimination_surrogate(const Graph& g, int r, int trials, std::uint64_t seed, double tol) {
  if (r < 1) fail(errk::BadInput, "sample count must be positive");
  if (trials < 1) fail(errk::BadInput, "trial count must be positive");
  const int d = g.vertex_count();
  const int m = g.edge_count();
  if (m == 0) fail(errk::BadInput, "rank probe needs at least one edge");

  SurrogateReport rep;
  rep.r = r;
  rep.trials = trials;
  rep.edge_count = m;

  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    Eigen::MatrixXd b(r, d);
    for (int k = 0; k < r; ++k)
      for (int v = 0; v < d; ++v) b(k, v) = rng.normal();
    const Eigen::VectorXd row_mean = b.rowwise().mean();
    b.colwise() -= row_mean;

    // d/dB of the squared column distances on the edges.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, r * d);
    for (int e = 0; e < m; ++e) {
      const int i = g.edges()[static_cast<std::size_t>(e)].first - 1;
      const int j = g.edges()[static_cast<std::size_t>(e)].second - 1;
      for (int k = 0; k < r; ++k) {
        const double diff = 2.0 * (b(k, i) - b(k, j));
        jac(e, k * d + i) = diff;
        jac(e, k * d + j) = -diff;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const double top = svd.singularValues()(0);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()(k) > tol * std::max(top, 1e-300)) ++rank;
    rep.max_rank = std::max(rep.max_rank, rank);
    if (rank == m) ++rep.full_rank_trials;
  }

  if (rep.full_rank_trials == trials)
    rep.verdict = SurrogateVerdict::ZeroIdealLikely;
  else if (rep.full_rank_trials == 0)
    rep.verdict = SurrogateVerdict::NotZero;
  else
    rep.verdict = SurrogateVerdict::Inconclusive;
  return rep;
}

const char* to_string(C4Outcome v) {
  switch (v) {
    case C4Outcome::ExistsCND: return "exists-cnd";
    case C4Outcome::NoCNDSolution: return "no-cnd-solution";
  }
  return "unknown";
}

C4ExperimentResult cycle4_rank1_experiment(double x2, double x3, double tol) {
  Eigen::Vector4d v(1.0, x2, x3, -(1.0 + x2 + x3));
  return cycle4_rank1_experiment(v, tol);
}

C4ExperimentResult cycle4_rank1_experiment(const Eigen::Vector4d& centered, double tol) {
  if (std::abs(centered.sum()) > 1e-9 * (1.0 + centered.cwiseAbs().maxCoeff()))
    fail(errk::BadInput, "sample must be centered");

  C4ExperimentResult res;
  res.sample = centered;
  res.observed = Eigen::MatrixXd::Zero(4, 4);

  // Bipartite labeling: the n-side is {1, 2}, the two-side {3, 4}; edges are
  // the four cross pairs, the diagonals (1,2) and (3,4) stay unknown.
  const int n = 2;
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(4, 4);
  double mean = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 4; ++j) {
      const double value = (centered(i) - centered(j)) * (centered(i) - centered(j));
      if (value <= 1e-12 * (1.0 + centered.squaredNorm()))
        fail(errk::DegenerateSample, "coincident coordinates give a vanishing edge entry");
      data(i, j) = data(j, i) = value;
      res.observed(i, j) = res.observed(j, i) = value;
      mean += value / 4.0;
    }

  InterpolatedPolynomial p = interpolate_polynomial(
      [&](std::complex<double> y) { return bipartite_critical_polynomial(data, n, y); }, mean, 2 * n);
  res.polynomial_degree = p.degree;

  std::vector<double> real_roots;
  for (const auto& y : polynomial_roots(p)) {
    if (std::abs(y.imag()) > 1e-8 * (1.0 + std::abs(y))) continue;
    if (std::abs(y) < 1e-9 * mean) continue;
    bool dup = false;
    for (double seen : real_roots)
      if (std::abs(seen - y.real()) <= 1e-7 * mean) {
        dup = true;
        break;
      }
    if (!dup) real_roots.push_back(y.real());
  }
  std::sort(real_roots.begin(), real_roots.end());

  for (double y : real_roots) {
    Eigen::MatrixXcd gamma_c = bipartite_candidate(data, n, y);
    Eigen::MatrixXd gamma = gamma_c.real();
    gamma = ((gamma + gamma.transpose()) / 2.0).eval();
    C4Candidate cand;
    cand.g34 = y;
    cand.g12 = gamma(0, 1);
    CndCertificate cert = is_strictly_cnd(gamma, tol);
    cand.strictly_cnd = cert.strict();
    cand.margin = cert.margin;
    res.candidates.push_back(cand);
    if (cand.strictly_cnd) res.outcome = C4Outcome::ExistsCND;
  }
  return res;
}

}  // namespace hrgm
