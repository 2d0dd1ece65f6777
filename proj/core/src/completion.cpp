#include "hrgm/completion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hrgm/errors.hpp"

namespace hrgm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_clique_blocks(const PartialVariogram& p, double tol) {
  for (const auto& clique : maximal_cliques(p.graph())) {
    Eigen::MatrixXd block = p.clique_block(clique);
    CndCertificate cert = is_strictly_cnd(block, tol);
    if (!cert.strict()) {
      std::ostringstream os;
      os << "clique block {";
      for (size_t i = 0; i < clique.size(); ++i) os << (i ? "," : "") << clique[i];
      os << "} is not strictly conditionally negative definite (margin " << cert.margin << ")";
      fail(errk::CliqueBlockNotCND, os.str());
    }
  }
}

// [M]^d: place a block indexed by verts (1-based, ascending) into a d x d
// zero matrix.
Eigen::MatrixXd embed(const Eigen::MatrixXd& block, const std::vector<int>& verts, int d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  const int k = static_cast<int>(verts.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(verts[i] - 1, verts[j] - 1) = block(i, j);
  return out;
}

double max_abs_edge_gap(const PartialVariogram& p, const Eigen::MatrixXd& gamma) {
  double worst = 0.0;
  for (const auto& e : p.graph().edges())
    worst = std::max(worst, std::abs(gamma(e.first - 1, e.second - 1) - p.at(e.first, e.second)));
  return worst;
}

double max_abs_nonedge(const Graph& g, const Eigen::MatrixXd& theta) {
  double worst = 0.0;
  for (int i = 1; i <= g.vertex_count(); ++i)
    for (int j = i + 1; j <= g.vertex_count(); ++j)
      if (!g.has_edge(i, j)) worst = std::max(worst, std::abs(theta(i - 1, j - 1)));
  return worst;
}

// logDet(Theta) + sum_{(i,j) in E} Theta_ij * data_ij, the surrogate
// objective shared by every method's trace.
double surrogate_objective(const PartialVariogram& p, const Eigen::MatrixXd& theta, double tol) {
  double val = log_pseudo_determinant(theta, tol);
  for (const auto& e : p.graph().edges()) val += theta(e.first - 1, e.second - 1) * p.at(e.first, e.second);
  return val;
}

CompletionResult assemble_from_blocks(const PartialVariogram& p, const std::vector<std::vector<int>>& cliques,
                                      const std::vector<std::pair<std::vector<int>, int>>& separators, double tol,
                                      const char* method) {
  const int d = p.graph().vertex_count();
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(d, d);
  for (const auto& c : cliques) theta += embed(theta_of_gamma(p.clique_block(c), tol), c, d);
  for (const auto& [s, mult] : separators)
    theta -= static_cast<double>(mult) * embed(theta_of_gamma(p.clique_block(s), tol), s, d);

  CompletionResult res;
  res.theta = theta;
  res.gamma = gamma_of_sigma(pseudo_inverse_oneperp(theta, tol), tol);
  res.status = CompletionStatus::Converged;
  res.edge_residual = max_abs_edge_gap(p, res.gamma);
  res.nonedge_residual = max_abs_nonedge(p.graph(), theta);
  res.iterations = 0;
  res.objective_trace.push_back(surrogate_objective(p, theta, tol));
  res.method = method;
  return res;
}

void require_connected(const Graph& g) {
  if (!g.connected()) fail(errk::Disconnected, "completion requires a connected graph");
}

// Fill values for the triangulation edges of a warm-start cover: squared
// shortest path length with edge lengths sqrt(data).
Eigen::MatrixXd squared_path_fill(const PartialVariogram& p) {
  const int d = p.graph().vertex_count();
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(d, d, inf);
  for (int i = 0; i < d; ++i) dist(i, i) = 0.0;
  for (const auto& e : p.graph().edges()) {
    double len = std::sqrt(std::max(p.at(e.first, e.second), 0.0));
    dist(e.first - 1, e.second - 1) = len;
    dist(e.second - 1, e.first - 1) = len;
  }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (dist(i, k) + dist(k, j) < dist(i, j)) dist(i, j) = dist(i, k) + dist(k, j);
  return dist.array().square().matrix();
}

struct EdgeBasis {
  std::vector<std::pair<int, int>> edges;  // 0-based endpoints
  Eigen::VectorXd data;                    // variogram values in edge order
};

EdgeBasis edge_basis(const PartialVariogram& p) {
  EdgeBasis b;
  for (const auto& e : p.graph().edges()) {
    b.edges.emplace_back(e.first - 1, e.second - 1);
    b.data.conservativeResize(static_cast<int>(b.edges.size()));
    b.data(static_cast<int>(b.edges.size()) - 1) = p.at(e.first, e.second);
  }
  return b;
}

Eigen::MatrixXd theta_from_weights(const EdgeBasis& b, const Eigen::VectorXd& q, int d) {
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(d, d);
  for (size_t e = 0; e < b.edges.size(); ++e) {
    auto [i, j] = b.edges[e];
    theta(i, i) += q(static_cast<int>(e));
    theta(j, j) += q(static_cast<int>(e));
    theta(i, j) -= q(static_cast<int>(e));
    theta(j, i) -= q(static_cast<int>(e));
  }
  return theta;
}

struct InteriorPoint {
  bool feasible = false;
  double logdet = 0.0;
  double min_eig = 0.0;
  double max_eig = 0.0;
  Eigen::MatrixXd sigma;  // pseudo-inverse, only valid when feasible
};

InteriorPoint analyze(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& u) {
  InteriorPoint pt;
  Eigen::MatrixXd core = u.transpose() * theta * u;
  core = ((core + core.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(core);
  pt.min_eig = es.eigenvalues().minCoeff();
  pt.max_eig = es.eigenvalues().maxCoeff();
  if (pt.min_eig <= 0.0) return pt;
  pt.feasible = true;
  pt.logdet = es.eigenvalues().array().log().sum();
  Eigen::MatrixXd inv_core =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  pt.sigma = u * inv_core * u.transpose();
  pt.sigma = ((pt.sigma + pt.sigma.transpose()) / 2.0).eval();
  return pt;
}

Eigen::VectorXd warm_start_weights(const PartialVariogram& p, const EdgeBasis& b, double tol) {
  const Graph& g = p.graph();
  const int d = g.vertex_count();
  try {
    MinFillResult cover = min_fill_cover(g);
    Eigen::MatrixXd fill = squared_path_fill(p);
    std::vector<std::tuple<int, int, double>> entries;
    for (const auto& e : cover.filled.edges()) {
      double v = g.has_edge(e.first, e.second) ? p.at(e.first, e.second) : fill(e.first - 1, e.second - 1);
      entries.emplace_back(e.first, e.second, v);
    }
    PartialVariogram cp = PartialVariogram::from_entries(cover.filled, entries, tol);
    CompletionResult chordal = complete_chordal(cp, tol);
    Eigen::VectorXd q(b.edges.size());
    for (size_t e = 0; e < b.edges.size(); ++e) q(static_cast<int>(e)) = -chordal.theta(b.edges[e].first, b.edges[e].second);
    // Truncating the triangulation Laplacian to the original edge set can
    // leave the cone; keep it only if it did not.
    Eigen::MatrixXd u = oneperp_basis(d);
    if (analyze(theta_from_weights(b, q, d), u).feasible) return q;
  } catch (const Error&) {
    // fall through to unit weights
  }
  return Eigen::VectorXd::Ones(static_cast<int>(b.edges.size()));
}

}  // namespace

PartialVariogram PartialVariogram::from_entries(Graph g, const std::vector<std::tuple<int, int, double>>& entries,
                                                double tol) {
  const int d = g.vertex_count();
  PartialVariogram p;
  p.m_ = Eigen::MatrixXd::Constant(d, d, kNan);
  for (int i = 0; i < d; ++i) p.m_(i, i) = 0.0;
  Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [i, j, v] : entries) {
    if (i < 1 || i > d || j < 1 || j > d || i == j) fail(errk::BadInput, "variogram entry index out of range");
    if (!g.has_edge(i, j)) fail(errk::BadInput, "variogram entry on a nonedge");
    if (seen(i - 1, j - 1) != 0.0 && p.m_(i - 1, j - 1) != v)
      fail(errk::BadInput, "conflicting duplicate variogram entry");
    if (!std::isfinite(v)) fail(errk::BadInput, "variogram entry is not finite");
    seen(i - 1, j - 1) = seen(j - 1, i - 1) = 1.0;
    p.m_(i - 1, j - 1) = p.m_(j - 1, i - 1) = v;
  }
  for (const auto& e : g.edges())
    if (seen(e.first - 1, e.second - 1) == 0.0) fail(errk::BadInput, "missing variogram entry for an edge");
  p.g_ = std::move(g);
  validate_clique_blocks(p, tol);
  return p;
}

PartialVariogram PartialVariogram::from_full(Graph g, const Eigen::MatrixXd& gamma, double tol) {
  check_variogram(gamma, tol);
  if (gamma.rows() != g.vertex_count()) fail(errk::BadInput, "matrix dimension does not match graph");
  std::vector<std::tuple<int, int, double>> entries;
  for (const auto& e : g.edges()) entries.emplace_back(e.first, e.second, gamma(e.first - 1, e.second - 1));
  return from_entries(std::move(g), entries, tol);
}

double PartialVariogram::at(int i, int j) const {
  if (i < 1 || i > g_.vertex_count() || j < 1 || j > g_.vertex_count()) fail(errk::BadInput, "vertex index out of range");
  if (i == j) return 0.0;
  if (!g_.has_edge(i, j)) fail(errk::BadInput, "variogram entry requested on a nonedge");
  return m_(i - 1, j - 1);
}

Eigen::MatrixXd PartialVariogram::clique_block(const std::vector<int>& verts) const {
  const int k = static_cast<int>(verts.size());
  Eigen::MatrixXd block(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) block(a, b) = (a == b) ? 0.0 : at(verts[a], verts[b]);
  return block;
}

PartialVariogram PartialVariogram::restrict_to(const std::vector<int>& verts) const {
  Graph sub = g_.induced(verts);
  std::vector<std::tuple<int, int, double>> entries;
  for (const auto& e : sub.edges()) entries.emplace_back(e.first, e.second, at(verts[e.first - 1], verts[e.second - 1]));
  PartialVariogram p;
  p.g_ = std::move(sub);
  const int k = static_cast<int>(verts.size());
  p.m_ = Eigen::MatrixXd::Constant(k, k, kNan);
  for (int i = 0; i < k; ++i) p.m_(i, i) = 0.0;
  for (const auto& [i, j, v] : entries) p.m_(i - 1, j - 1) = p.m_(j - 1, i - 1) = v;
  return p;  // clique blocks of an induced subgraph sit inside validated ones
}

const char* to_string(CompletionStatus s) {
  switch (s) {
    case CompletionStatus::Converged: return "converged";
    case CompletionStatus::MaxIterations: return "max-iterations";
    case CompletionStatus::LeftCone: return "left-cone";
    case CompletionStatus::NoCNDSolution: return "no-cnd-solution";
  }
  return "unknown";
}

CompletionResult complete_chordal(const PartialVariogram& p, double tol) {
  require_connected(p.graph());
  ChordalDecomposition dec = chordal_decomposition(p.graph());
  return assemble_from_blocks(p, dec.cliques, dec.separators, tol, "chordal");
}

CompletionResult complete_two_clique(const PartialVariogram& p, double tol) {
  require_connected(p.graph());
  if (maximal_cliques(p.graph()).size() > 2)
    fail(errk::NotTwoCliqueCover, "graph is not covered by two maximal cliques");
  CompletionResult res = complete_chordal(p, tol);
  res.method = "two-clique";
  return res;
}

CompletionResult complete_general(const PartialVariogram& p, const CompletionOptions& opts) {
  require_connected(p.graph());
  const int d = p.graph().vertex_count();
  const double tol = opts.tol;
  EdgeBasis b = edge_basis(p);
  const int m = static_cast<int>(b.edges.size());
  if (m == 0) fail(errk::BadInput, "iterative completion needs at least one edge");

  // Work on data normalized to unit scale; q and Theta scale back by 1/s.
  const double scale = std::max(b.data.cwiseAbs().maxCoeff(), 1e-300);
  EdgeBasis nb = b;
  nb.data /= scale;
  PartialVariogram np = PartialVariogram::from_full(p.graph(), [&] {
    Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(d, d);
    for (int e = 0; e < m; ++e) {
      g0(nb.edges[e].first, nb.edges[e].second) = nb.data(e);
      g0(nb.edges[e].second, nb.edges[e].first) = nb.data(e);
    }
    return g0;
  }(), tol);

  const Eigen::MatrixXd u = oneperp_basis(d);
  Eigen::VectorXd q = warm_start_weights(np, nb, tol);
  InteriorPoint pt = analyze(theta_from_weights(nb, q, d), u);
  if (!pt.feasible) {
    q = Eigen::VectorXd::Ones(m);
    pt = analyze(theta_from_weights(nb, q, d), u);
  }

  CompletionResult res;
  res.method = "general";
  res.status = CompletionStatus::MaxIterations;

  auto objective = [&](const InteriorPoint& at, const Eigen::VectorXd& weights) {
    return at.logdet - weights.dot(nb.data);
  };

  double best_residual = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  const double grad_scale = std::max(1.0, nb.data.cwiseAbs().maxCoeff());

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Eigen::VectorXd grad(m);
    for (int e = 0; e < m; ++e) {
      auto [i, j] = nb.edges[e];
      double gamma_e = pt.sigma(i, i) + pt.sigma(j, j) - 2.0 * pt.sigma(i, j);
      grad(e) = gamma_e - nb.data(e);
    }
    const double f0 = objective(pt, q);
    res.objective_trace.push_back(f0);
    const double residual = grad.cwiseAbs().maxCoeff() / grad_scale;
    if (residual <= tol) {
      res.status = CompletionStatus::Converged;
      break;
    }

    if (residual < best_residual * (1.0 - 1e-9)) {
      best_residual = residual;
      stagnant = 0;
    } else {
      ++stagnant;
    }
    const double interior_ratio = pt.min_eig / pt.max_eig;
    // A run toward the cone boundary with a residual that refuses to fall
    // means the stationarity equations have no solution inside the cone.
    if ((interior_ratio < 1e-13 && residual > 10.0 * tol) || (stagnant > 60 && interior_ratio < 1e-8) ||
        q.cwiseAbs().maxCoeff() > 1e13) {
      res.status = CompletionStatus::NoCNDSolution;
      break;
    }

    Eigen::VectorXd step = grad;
    if (opts.use_newton) {
      Eigen::MatrixXd hess_neg(m, m);  // -(Hessian), PSD Hadamard square
      for (int e = 0; e < m; ++e) {
        for (int f = e; f < m; ++f) {
          auto [i, j] = nb.edges[e];
          auto [k, l] = nb.edges[f];
          double cross = pt.sigma(i, k) - pt.sigma(i, l) - pt.sigma(j, k) + pt.sigma(j, l);
          hess_neg(e, f) = hess_neg(f, e) = cross * cross;
        }
      }
      hess_neg.diagonal().array() += 1e-12 * hess_neg.diagonal().maxCoeff() + 1e-300;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess_neg);
      if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd candidate = ldlt.solve(grad);
        if (candidate.allFinite() && candidate.dot(grad) > 0.0) step = candidate;
      }
    }

    double t = 1.0;
    const double slope = step.dot(grad);
    bool moved = false;
    while (t > 1e-18) {
      Eigen::VectorXd qt = q + t * step;
      InteriorPoint cand = analyze(theta_from_weights(nb, qt, d), u);
      if (cand.feasible && objective(cand, qt) >= f0 + 1e-4 * t * slope) {
        q = qt;
        pt = cand;
        moved = true;
        break;
      }
      t /= 2.0;
    }
    if (!moved && opts.use_newton) {
      // Retry along the raw gradient before giving up.
      t = 1.0;
      while (t > 1e-18) {
        Eigen::VectorXd qt = q + t * grad;
        InteriorPoint cand = analyze(theta_from_weights(nb, qt, d), u);
        if (cand.feasible && objective(cand, qt) > f0) {
          q = qt;
          pt = cand;
          moved = true;
          break;
        }
        t /= 2.0;
      }
    }
    if (!moved) {
      res.status = (pt.min_eig / pt.max_eig < 1e-8) ? CompletionStatus::NoCNDSolution : CompletionStatus::LeftCone;
      ++it;
      break;
    }
  }

  res.iterations = it;
  Eigen::MatrixXd theta_n = theta_from_weights(nb, q, d);
  res.theta = theta_n / scale;
  if (pt.feasible) {
    Eigen::MatrixXd sigma = pt.sigma * scale;
    res.gamma = gamma_of_sigma(sigma, tol);
  } else {
    res.gamma = Eigen::MatrixXd::Zero(d, d);
  }
  res.edge_residual = pt.feasible ? max_abs_edge_gap(p, res.gamma) : std::numeric_limits<double>::infinity();
  res.nonedge_residual = max_abs_nonedge(p.graph(), res.theta);
  return res;
}

namespace {

SeparatorSplit split_from_forced(const Graph& g, const std::vector<int>& sep) {
  for (size_t a = 0; a < sep.size(); ++a)
    for (size_t b = a + 1; b < sep.size(); ++b)
      if (!g.has_edge(sep[a], sep[b])) fail(errk::BadInput, "forced separator is not a clique");
  std::vector<std::vector<int>> comps = components_without(g, sep);
  if (comps.size() < 2) fail(errk::BadInput, "forced separator does not disconnect the graph");
  SeparatorSplit split;
  split.separator = sep;
  std::sort(split.separator.begin(), split.separator.end());
  split.a_side = comps.front();
  for (size_t c = 1; c < comps.size(); ++c)
    split.b_side.insert(split.b_side.end(), comps[c].begin(), comps[c].end());
  for (int v : split.separator) {
    split.a_side.push_back(v);
    split.b_side.push_back(v);
  }
  std::sort(split.a_side.begin(), split.a_side.end());
  std::sort(split.b_side.begin(), split.b_side.end());
  return split;
}

}  // namespace

CompletionResult complete_decomposed(const PartialVariogram& p, const CompletionOptions& opts) {
  require_connected(p.graph());
  if (!opts.forced_separator && is_chordal(p.graph())) {
    CompletionResult res = complete_chordal(p, opts.tol);
    res.method = "decomposed";
    return res;
  }

  std::optional<SeparatorSplit> split;
  if (opts.forced_separator) {
    split = split_from_forced(p.graph(), *opts.forced_separator);
  } else {
    split = split_at_clique_separator(p.graph());
  }
  if (!split) {
    CompletionResult res = complete_general(p, opts);
    res.method = "decomposed";
    return res;
  }

  CompletionOptions sub = opts;
  sub.forced_separator.reset();
  CompletionResult ra = complete_decomposed(p.restrict_to(split->a_side), sub);
  CompletionResult rb = complete_decomposed(p.restrict_to(split->b_side), sub);

  CompletionResult res;
  res.method = "decomposed";
  res.iterations = ra.iterations + rb.iterations;
  res.objective_trace = ra.objective_trace;
  res.objective_trace.insert(res.objective_trace.end(), rb.objective_trace.begin(), rb.objective_trace.end());
  if (ra.status != CompletionStatus::Converged || rb.status != CompletionStatus::Converged) {
    res.status = ra.status != CompletionStatus::Converged ? ra.status : rb.status;
    return res;
  }

  const int d = p.graph().vertex_count();
  Eigen::MatrixXd theta = embed(ra.theta, split->a_side, d) + embed(rb.theta, split->b_side, d) -
                          embed(theta_of_gamma(p.clique_block(split->separator), opts.tol), split->separator, d);
  res.theta = theta;
  res.gamma = gamma_of_sigma(pseudo_inverse_oneperp(theta, opts.tol), opts.tol);
  res.status = CompletionStatus::Converged;
  res.edge_residual = max_abs_edge_gap(p, res.gamma);
  res.nonedge_residual = max_abs_nonedge(p.graph(), theta);
  res.objective_trace.push_back(surrogate_objective(p, theta, opts.tol));
  return res;
}

CompletionResult complete_auto(const PartialVariogram& p, const CompletionOptions& opts) {
  require_connected(p.graph());
  if (is_chordal(p.graph())) return complete_chordal(p, opts.tol);
  return complete_decomposed(p, opts);
}

}  // namespace hrgm
