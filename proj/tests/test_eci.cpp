#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <queue>
#include <set>

#include "hrgm/completion.hpp"
#include "hrgm/eci.hpp"
#include "hrgm/errors.hpp"
#include "hrgm/graph.hpp"
#include "hrgm/rng.hpp"
#include "oracles.hpp"

using namespace hrgm;

namespace {

// BFS separation oracle: no path from A to B avoiding C.
bool separates(const Graph& g, const CIStatement& s) {
  std::set<int> blocked(s.c.begin(), s.c.end());
  std::set<int> target(s.b.begin(), s.b.end());
  std::set<int> seen;
  std::queue<int> frontier;
  for (int v : s.a)
    if (!blocked.count(v)) {
      frontier.push(v);
      seen.insert(v);
    }
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    if (target.count(v)) return false;
    for (int u : g.neighbors(v))
      if (!blocked.count(u) && seen.insert(u).second) frontier.push(u);
  }
  return true;
}

// Random point of the model of g: complete random restricted data.
Eigen::MatrixXd model_point(const Graph& g, std::uint64_t seed) {
  CounterRng rng(seed);
  const Eigen::MatrixXd full = oracle::random_strict_cnd(g.vertex_count(), rng);
  CompletionOptions opts;
  CompletionResult r = complete_auto(PartialVariogram::from_full(g, full), opts);
  REQUIRE(r.status == CompletionStatus::Converged);
  return r.gamma;
}

}  // namespace

TEST_SUITE_BEGIN("eci");

TEST_CASE("statement validation") {
  CHECK_NOTHROW(check_statement({{1}, {3}, {2}}, 3));
  CHECK_NOTHROW(check_statement({{1}, {3}, {}}, 3));
  CHECK_THROWS_AS(check_statement({{}, {3}, {2}}, 3), Error);
  CHECK_THROWS_AS(check_statement({{1}, {1}, {2}}, 3), Error);
  CHECK_THROWS_AS(check_statement({{1}, {4}, {2}}, 3), Error);
  CHECK_THROWS_AS(check_statement({{1, 1}, {3}, {2}}, 3), Error);
}

TEST_CASE("rank test on the canonical path example") {
  Eigen::MatrixXd gamma(3, 3);
  gamma << 0, 9, 25, 9, 0, 16, 25, 16, 0;

  EciResult mid = test_eci(gamma, {{1}, {3}, {2}});
  CHECK(mid.holds);
  CHECK(mid.rank == 2);
  CHECK(mid.expected_rank == 2);
  CHECK(mid.margin <= 1e-10);

  EciResult wrong = test_eci(gamma, {{1}, {2}, {3}});
  CHECK(!wrong.holds);
  CHECK(wrong.rank == 3);

  // Marginal independence fails too: the bordered 2x2-with-ones block has
  // rank 2 > 1.
  EciResult marginal = test_eci(gamma, {{1}, {3}, {}});
  CHECK(!marginal.holds);

  CHECK(saturated_pair(gamma, 1, 3));
  CHECK(!saturated_pair(gamma, 1, 2));
  CHECK(!saturated_pair(gamma, 2, 3));
}

TEST_CASE("rank agrees with a row-reduction oracle") {
  CounterRng rng(501);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 4 + static_cast<int>(rng.below(4));
    const Eigen::MatrixXd gamma = oracle::random_strict_cnd(d, rng);
    // Random disjoint nonempty A, B and C.
    std::vector<int> verts(d);
    std::iota(verts.begin(), verts.end(), 1);
    for (int i = d - 1; i > 0; --i) std::swap(verts[i], verts[static_cast<int>(rng.below(i + 1))]);
    CIStatement s;
    s.a = {verts[0]};
    s.b = {verts[1]};
    for (int k = 2; k < d && k < 2 + static_cast<int>(rng.below(3)); ++k) s.c.push_back(verts[k]);
    std::sort(s.c.begin(), s.c.end());

    EciResult r = test_eci(gamma, s);
    std::vector<int> rows = s.a, cols = s.b;
    rows.insert(rows.end(), s.c.begin(), s.c.end());
    cols.insert(cols.end(), s.c.begin(), s.c.end());
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    Eigen::MatrixXd block(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) block(i, j) = gamma(rows[i] - 1, cols[j] - 1);
    CHECK(r.rank == oracle::rank_row_reduce(cm_matrix_rect(block), 1e-9));
    CHECK(r.expected_rank == static_cast<int>(s.c.size()) + 1);
    CHECK(r.holds == (r.rank == r.expected_rank));
  }
}

TEST_CASE("separation statements are exactly the component splits") {
  Graph p4 = path_graph(4);
  auto statements = separation_statements(p4);
  CHECK(!statements.empty());
  for (const auto& s : statements) {
    CHECK(separates(p4, s));
    CHECK(!s.a.empty());
    CHECK(!s.b.empty());
  }
  // The split at vertex 2 is present, with full components on both sides.
  bool found = false;
  for (const auto& s : statements)
    found = found || (s.a == std::vector<int>{1} && s.b == std::vector<int>{3, 4} && s.c == std::vector<int>{2}) ||
            (s.a == std::vector<int>{3, 4} && s.b == std::vector<int>{1} && s.c == std::vector<int>{2});
  CHECK(found);
  CHECK_THROWS_WITH_AS(separation_statements(complete_graph(12), 10), doctest::Contains(errk::SizeCap), Error);
  // Complete graphs have no separations at all.
  CHECK(separation_statements(complete_graph(5)).empty());

  CounterRng rng(502);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = oracle::random_connected_graph(4 + static_cast<int>(rng.below(4)), rng, 0.4);
    for (const auto& s : separation_statements(g)) CHECK(separates(g, s));
  }
}

TEST_CASE("global Markov property holds numerically at model points") {
  CounterRng rng(503);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = 4 + static_cast<int>(rng.below(4));
    Graph g = oracle::random_connected_graph(d, rng, 0.4);
    const Eigen::MatrixXd gamma = model_point(g, 7000 + trial);
    for (const auto& s : separation_statements(g)) {
      EciResult r = test_eci(gamma, s);
      CHECK(r.holds);
    }
    // Saturated pair tests detect exactly the nonedges.
    for (int i = 1; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j)
        CHECK(saturated_pair(gamma, i, j) == !g.has_edge(i, j));
  }
}

TEST_CASE("generic points violate the statements") {
  CounterRng rng(504);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 5;
    const Eigen::MatrixXd gamma = oracle::random_strict_cnd(d, rng);
    for (int i = 1; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) CHECK(!saturated_pair(gamma, i, j));
  }
}

TEST_CASE("generator atoms evaluate to bordered minors and track the rank verdict") {
  CIStatement s{{1}, {2}, {3, 4}};
  auto atoms = generator_atoms(s);
  // #A' choices C(3,3) = 1, #B' choices C(3,3) = 1.
  CHECK(atoms.size() == 1);
  CIStatement wide{{1, 2}, {3, 4}, {5}};
  // C(3,2) * C(3,2) = 9.
  CHECK(generator_atoms(wide).size() == 9);

  CounterRng rng(505);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd gamma = oracle::random_strict_cnd(6, rng);
    for (const auto& atom : generator_atoms(wide)) {
      AtomEvaluation ev = evaluate_atoms(gamma, {atom});
      Eigen::MatrixXd block(atom.rows.size(), atom.cols.size());
      for (std::size_t i = 0; i < atom.rows.size(); ++i)
        for (std::size_t j = 0; j < atom.cols.size(); ++j) block(i, j) = gamma(atom.rows[i] - 1, atom.cols[j] - 1);
      const double expected = oracle::det_leibniz(cm_matrix_rect(block));
      CHECK(ev.values[0] == doctest::Approx(expected).epsilon(1e-9).scale(std::max(1.0, std::abs(expected))));
    }
  }

  // Theorem-level agreement: at model points, atoms of true statements
  // vanish; at generic points the atoms of a false statement do not.
  Graph g = Graph::from_edges(5, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
  const Eigen::MatrixXd gamma = model_point(g, 9001);
  for (const auto& s2 : separation_statements(g)) {
    AtomEvaluation ev = evaluate_atoms(gamma, generator_atoms(s2));
    EciResult r = test_eci(gamma, s2);
    CHECK(r.holds);
    CHECK(ev.max_normalized <= default_tol());
  }
  CounterRng gen_rng(506);
  const Eigen::MatrixXd generic = oracle::random_strict_cnd(5, gen_rng);
  CIStatement false_stmt{{1}, {2}, {3}};
  CHECK(!test_eci(generic, false_stmt).holds);
  CHECK(evaluate_atoms(generic, generator_atoms(false_stmt)).max_normalized > default_tol());
}

TEST_CASE("determinant expansion identities hold to rounding") {
  CounterRng rng(507);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(4));
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
    ExpansionResiduals res = det_expansion_check(m);
    const double scale = std::pow(m.cwiseAbs().maxCoeff(), n);
    CHECK(res.first_row <= 1e-9 * std::max(1.0, scale));
    CHECK(res.column_family <= 1e-9 * std::max(1.0, scale));
  }
  ExpansionResiduals id = det_expansion_check(Eigen::MatrixXd::Identity(4, 4));
  CHECK(id.first_row <= 1e-12);
  Eigen::MatrixXd repeated(3, 3);
  repeated << 1, 2, 3, 1, 2, 3, 4, 5, 6;
  CHECK(det_expansion_check(repeated).first_row <= 1e-12);
}

TEST_CASE("pentad certificate separates model from saturated points") {
  // Transcription self-check at a saturated point.
  CounterRng rng(508);
  const Eigen::MatrixXd saturated = oracle::random_strict_cnd(8, rng);
  PentadResult generic = pentad_residual(saturated);
  CHECK(generic.scale > 0.0);
  CHECK(generic.normalized > 1e-6);

  // The model graph is as advertised.
  Graph g = pentad_model_graph();
  CHECK(g.vertex_count() == 8);
  CHECK(universal_vertex(g).has_value());
  for (int i = 1; i <= 7; ++i) CHECK(g.has_edge(i, 8));
  CHECK(g.has_edge(6, 7));
  for (int i = 1; i <= 5; ++i) {
    CHECK(g.has_edge(i, 6));
    CHECK(g.has_edge(i, 7));
    for (int j = i + 1; j <= 5; ++j) CHECK(!g.has_edge(i, j));
  }
  CHECK(is_chordal(g));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PentadResult on_model = pentad_residual(model_point(g, 500 + seed));
    CHECK(on_model.normalized <= 1e-8);
  }

  PentadResult zero = pentad_residual(Eigen::MatrixXd::Zero(8, 8));
  CHECK(zero.value == 0.0);
}

TEST_SUITE_END();
