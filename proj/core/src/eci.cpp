#include "hrgm/eci.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "hrgm/errors.hpp"

namespace hrgm {

namespace {

std::vector<int> sorted_union(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i] - 1, cols[j] - 1);
  return out;
}

void all_subsets_of_size(const std::vector<int>& pool, int size,
                         const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == size) {
      visit(cur);
      return;
    }
    for (std::size_t k = start; k < pool.size(); ++k) {
      cur.push_back(pool[k]);
      rec(k + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

void check_statement(const CIStatement& s, int d) {
  if (s.a.empty() || s.b.empty()) fail(errk::BadInput, "statement needs nonempty A and B");
  std::set<int> seen;
  for (const auto* part : {&s.a, &s.b, &s.c})
    for (int v : *part) {
      if (v < 1 || v > d) fail(errk::BadInput, "statement vertex " + std::to_string(v) + " out of range");
      if (!seen.insert(v).second) fail(errk::BadInput, "statement parts must be disjoint");
    }
}

EciResult test_eci(const Eigen::MatrixXd& gamma, const CIStatement& s, double tol) {
  check_variogram(gamma, tol);
  const int d = static_cast<int>(gamma.rows());
  check_statement(s, d);
  CIStatement st = s;
  std::sort(st.a.begin(), st.a.end());
  std::sort(st.b.begin(), st.b.end());
  std::sort(st.c.begin(), st.c.end());
  const auto rows = sorted_union(st.a, st.c);
  const auto cols = sorted_union(st.b, st.c);
  const Eigen::MatrixXd bordered = cm_matrix_rect(submatrix(gamma, rows, cols));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(bordered);
  EciResult out;
  out.singular_values = svd.singularValues();
  out.expected_rank = static_cast<int>(st.c.size()) + 1;
  const double top = std::max(out.singular_values(0), 1e-300);
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values(i) > tol * top) ++out.rank;
  out.margin = out.expected_rank < out.singular_values.size()
                   ? out.singular_values(out.expected_rank) / top
                   : 0.0;
  out.holds = (out.rank == out.expected_rank);
  return out;
}

bool saturated_pair(const Eigen::MatrixXd& gamma, int i, int j, double tol) {
  const int d = static_cast<int>(gamma.rows());
  if (i < 1 || i > d || j < 1 || j > d || i == j) fail(errk::BadInput, "saturated pair needs two distinct vertices");
  const Eigen::MatrixXd theta = theta_of_gamma(gamma, tol);
  return std::abs(theta(i - 1, j - 1)) <= tol * theta.cwiseAbs().maxCoeff();
}

std::vector<CIStatement> separation_statements(const Graph& g, int size_cap) {
  const int d = g.vertex_count();
  if (d > size_cap)
    fail(errk::SizeCap, "separation enumeration capped at " + std::to_string(size_cap) + " vertices");
  std::vector<CIStatement> out;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> c;
    for (int v = 1; v <= d; ++v)
      if (mask & (1u << (v - 1))) c.push_back(v);
    if (static_cast<int>(c.size()) > d - 2) continue;
    // Components of g - C.
    std::vector<bool> removed(static_cast<std::size_t>(d) + 1, false);
    for (int v : c) removed[static_cast<std::size_t>(v)] = true;
    std::vector<bool> seen(static_cast<std::size_t>(d) + 1, false);
    std::vector<std::vector<int>> comps;
    for (int s = 1; s <= d; ++s) {
      if (removed[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
      std::vector<int> comp, stack = {s};
      seen[static_cast<std::size_t>(s)] = true;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (int u : g.neighbors(v))
          if (!removed[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
            seen[static_cast<std::size_t>(u)] = true;
            stack.push_back(u);
          }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    if (comps.size() < 2) continue;
    std::sort(comps.begin(), comps.end());
    for (std::size_t x = 0; x < comps.size(); ++x)
      for (std::size_t y = x + 1; y < comps.size(); ++y) out.push_back({comps[x], comps[y], c});
  }
  return out;
}

std::vector<GeneratorAtom> generator_atoms(const CIStatement& s) {
  if (s.a.empty() || s.b.empty()) fail(errk::BadInput, "statement needs nonempty A and B");
  CIStatement st = s;
  std::sort(st.a.begin(), st.a.end());
  std::sort(st.b.begin(), st.b.end());
  std::sort(st.c.begin(), st.c.end());
  const auto rows_pool = sorted_union(st.a, st.c);
  const auto cols_pool = sorted_union(st.b, st.c);
  const int size = static_cast<int>(st.c.size()) + 1;
  std::vector<GeneratorAtom> atoms;
  all_subsets_of_size(rows_pool, size, [&](const std::vector<int>& rows) {
    all_subsets_of_size(cols_pool, size, [&](const std::vector<int>& cols) {
      atoms.push_back({rows, cols});
    });
  });
  return atoms;
}

AtomEvaluation evaluate_atoms(const Eigen::MatrixXd& gamma, const std::vector<GeneratorAtom>& atoms) {
  check_variogram(gamma);
  AtomEvaluation out;
  if (atoms.empty()) return out;
  const int size = static_cast<int>(atoms.front().rows.size());
  for (const auto& atom : atoms) {
    if (static_cast<int>(atom.rows.size()) != size || static_cast<int>(atom.cols.size()) != size)
      fail(errk::BadInput, "atoms in one evaluation must share a size");
    const Eigen::MatrixXd m = cm_matrix_rect(submatrix(gamma, atom.rows, atom.cols));
    out.values.push_back(m.determinant());
  }
  // Scale: largest |minor| of the bordered matrix at the atom size, over all
  // row and column subsets.
  const Eigen::MatrixXd cm = cm_matrix(gamma);
  const int n = static_cast<int>(cm.rows());
  const int k = size + 1;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  double scale = 0.0;
  all_subsets_of_size(all, k, [&](const std::vector<int>& rows) {
    all_subsets_of_size(all, k, [&](const std::vector<int>& cols) {
      Eigen::MatrixXd minor(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor(i, j) = cm(rows[static_cast<std::size_t>(i)] - 1, cols[static_cast<std::size_t>(j)] - 1);
      scale = std::max(scale, std::abs(minor.determinant()));
    });
  });
  out.scale = std::max(scale, 1e-300);
  for (double v : out.values) {
    out.normalized.push_back(std::abs(v) / out.scale);
    out.max_normalized = std::max(out.max_normalized, out.normalized.back());
  }
  return out;
}

ExpansionResiduals det_expansion_check(const Eigen::MatrixXd& m) {
  check_square(m, "expansion input");
  const int n = static_cast<int>(m.rows());
  const double det = m.determinant();
  std::vector<double> dj(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd t = m;
    t.col(j).setOnes();
    dj[static_cast<std::size_t>(j)] = t.determinant();
  }
  ExpansionResiduals out;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += m(0, j) * dj[static_cast<std::size_t>(j)];
  out.first_row = std::abs(det - sum);

  for (int j = 0; j < n; ++j) {
    std::vector<double> dij(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd t = m;
      t.row(i).setOnes();
      t.col(j).setOnes();
      t(i, j) = 0.0;
      dij[static_cast<std::size_t>(i)] = t.determinant();
    }
    for (int x = 0; x < n; ++x) {
      if (x == j) continue;
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += m(i, x) * dij[static_cast<std::size_t>(i)];
      out.column_family = std::max(out.column_family, std::abs(dj[static_cast<std::size_t>(j)] - s));
    }
  }
  return out;
}

PentadResult pentad_residual(const Eigen::MatrixXd& gamma) {
  check_variogram(gamma);
  if (gamma.rows() != 8) fail(errk::BadInput, "pentad certificate needs d = 8");
  using Pair = std::array<int, 2>;
  struct Term {
    int sign;
    std::array<Pair, 5> factors;
  };
  static const std::array<Term, 12> kTerms = {{
      {-1, {{{2, 3}, {1, 4}, {3, 4}, {1, 5}, {2, 5}}}},
      {+1, {{{1, 3}, {2, 4}, {3, 4}, {1, 5}, {2, 5}}}},
      {+1, {{{2, 3}, {1, 4}, {2, 4}, {1, 5}, {3, 5}}}},
      {-1, {{{1, 2}, {2, 4}, {3, 4}, {1, 5}, {3, 5}}}},
      {-1, {{{1, 3}, {1, 4}, {2, 4}, {2, 5}, {3, 5}}}},
      {+1, {{{1, 2}, {1, 4}, {3, 4}, {2, 5}, {3, 5}}}},
      {-1, {{{1, 3}, {2, 3}, {2, 4}, {1, 5}, {4, 5}}}},
      {+1, {{{1, 2}, {2, 3}, {3, 4}, {1, 5}, {4, 5}}}},
      {+1, {{{1, 3}, {2, 3}, {1, 4}, {2, 5}, {4, 5}}}},
      {-1, {{{1, 2}, {1, 3}, {3, 4}, {2, 5}, {4, 5}}}},
      {-1, {{{1, 2}, {2, 3}, {1, 4}, {3, 5}, {4, 5}}}},
      {+1, {{{1, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}}}},
  }};
  auto factor = [&](const Pair& p) {
    const int a = p[0] - 1, b = p[1] - 1;
    return -gamma(a, b) + gamma(a, 7) + gamma(b, 7);
  };
  PentadResult out;
  for (const auto& term : kTerms) {
    double prod = term.sign;
    for (const auto& p : term.factors) prod *= factor(p);
    out.value += prod;
    out.scale = std::max(out.scale, std::abs(prod));
  }
  out.scale = std::max(out.scale, 1e-300);
  out.normalized = std::abs(out.value) / out.scale;
  return out;
}

Graph pentad_model_graph() {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= 5; ++i) {
    e.emplace_back(i, 6);
    e.emplace_back(i, 7);
  }
  e.emplace_back(6, 7);
  Graph h = Graph::from_edges(7, std::move(e));
  return h.suspension();
}

}  // namespace hrgm
