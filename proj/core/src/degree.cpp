#include "hrgm/degree.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "hrgm/errors.hpp"
#include "hrgm/rng.hpp"
#include "hrgm/varalg.hpp"

namespace hrgm {

namespace {

long long pow2(int k) {
  if (k < 0 || k > 62) fail(errk::TooLarge, "power of two exceeds the 64-bit range");
  return 1LL << k;
}

// Gaussian ML degree where a closed form is known: 1 exactly on chordal
// graphs, the cycle and complete bipartite formulas, products over clique
// separators.
std::optional<long long> known_gaussian_mld(const Graph& g) {
  if (!g.connected()) return std::nullopt;
  if (is_chordal(g)) return 1LL;
  if (is_cycle_graph(g)) return mld_gaussian_cycle(g.vertex_count());
  if (auto n = complete_bipartite_2n_size(g)) return 2LL * *n + 1;
  if (auto split = split_at_clique_separator(g)) {
    auto a = known_gaussian_mld(g.induced(split->a_side));
    auto b = known_gaussian_mld(g.induced(split->b_side));
    if (a && b) return *a * *b;
  }
  return std::nullopt;
}

}  // namespace

long long emld_cycle(int n) {
  if (n < 3) fail(errk::BadInput, "cycle needs at least three vertices");
  return pow2(n - 1) - n;
}

long long mld_gaussian_cycle(int n) {
  if (n < 3) fail(errk::BadInput, "cycle needs at least three vertices");
  return static_cast<long long>(n - 3) * pow2(n - 2) + 1;
}

bool mld_relations_check(int n) {
  if (n < 3 || n > 61) fail(errk::BadInput, "identity check supports 3 <= n <= 61");
  const long long gap = mld_gaussian_cycle(n) - emld_cycle(n);
  if (gap != pow2(n - 2) * static_cast<long long>(n - 5) + n + 1) return false;
  if (n >= 4) {
    using wide = __int128;
    const wide lhs = mld_gaussian_cycle(n);
    const wide rhs =
        wide(emld_cycle(n)) * emld_cycle(n) - wide(emld_cycle(n - 1)) * emld_cycle(n + 1);
    if (lhs != rhs) return false;
  }
  return true;
}

DegreeReport extremal_ml_degree(const Graph& g) {
  if (!g.connected()) fail(errk::Disconnected, "degree computation expects a connected graph");
  DegreeReport r;
  const int d = g.vertex_count();

  if (is_chordal(g)) {
    r.family = "chordal";
    r.emld = 1;
    r.mld = 1;
    r.method = "clique-tree factorization";
    r.notes = "the surrogate likelihood has a unique critical point";
    return r;
  }
  if (is_cycle_graph(g)) {
    r.family = "cycle";
    r.emld = emld_cycle(d);
    r.mld = mld_gaussian_cycle(d);
    r.method = "closed form";
    return r;
  }
  if (auto n = complete_bipartite_2n_size(g)) {
    r.family = "complete-bipartite";
    r.emld = 2LL * *n;
    r.mld = 2LL * *n + 1;
    r.method = "closed form";
    return r;
  }
  if (auto apex = universal_vertex(g)) {
    std::vector<int> rest;
    for (int v = 1; v <= d; ++v)
      if (v != *apex) rest.push_back(v);
    if (auto base_mld = known_gaussian_mld(g.induced(rest))) {
      r.family = "suspension";
      r.emld = *base_mld;
      r.method = "cone reduction";
      r.notes = "extremal degree of a cone equals the Gaussian degree of its base";
      return r;
    }
  }
  if (auto split = split_at_clique_separator(g)) {
    DegreeReport ra = extremal_ml_degree(g.induced(split->a_side));
    DegreeReport rb = extremal_ml_degree(g.induced(split->b_side));
    if (ra.emld && rb.emld) {
      r.family = "separable";
      r.emld = *ra.emld * *rb.emld;
      if (ra.mld && rb.mld) r.mld = *ra.mld * *rb.mld;
      r.method = "clique separator factorization";
      return r;
    }
  }
  r.family = "unknown";
  r.method = "none";
  r.notes = "no closed form implemented for this graph";
  return r;
}

Eigen::MatrixXcd bipartite_candidate(const Eigen::MatrixXd& data, int n, std::complex<double> y) {
  const int d = n + 2;
  Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    gamma(i, n) = gamma(n, i) = data(i, n);
    gamma(i, n + 1) = gamma(n + 1, i) = data(i, n + 1);
  }
  gamma(n, n + 1) = gamma(n + 1, n) = y;
  // Entries inside the n-side are forced by the vanishing of the Laplacian
  // there; each carries a single simple pole at y = 0.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> sum = data(i, n) + data(i, n + 1) + data(j, n) + data(j, n + 1);
      const std::complex<double> twist = (data(i, n) - data(i, n + 1)) * (data(j, n) - data(j, n + 1));
      gamma(i, j) = gamma(j, i) = 0.5 * (-y + sum - twist / y);
    }
  return gamma;
}

std::complex<double> bipartite_critical_polynomial(const Eigen::MatrixXd& data, int n, std::complex<double> y) {
  const int d = n + 2;
  Eigen::MatrixXcd gamma = bipartite_candidate(data, n, y);
  // Bordered determinant of the candidate with the row of vertex n+1 and the
  // column of vertex n+2 removed; y^n clears the poles, leaving a polynomial
  // of degree 2n whose roots are the critical points.
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
  std::vector<int> rows, cols;
  for (int v = 0; v < d; ++v) {
    if (v != n) rows.push_back(v);
    if (v != n + 1) cols.push_back(v);
  }
  for (int a = 0; a < d - 1; ++a)
    for (int c = 0; c < d - 1; ++c) b(a, c) = gamma(rows[a], cols[c]);
  for (int a = 0; a < d - 1; ++a) b(a, d - 1) = b(d - 1, a) = 1.0;
  return std::pow(y, n) * b.partialPivLu().determinant();
}

InterpolatedPolynomial interpolate_polynomial(const std::function<std::complex<double>(std::complex<double>)>& f,
                                              double radius, int max_degree) {
  if (radius <= 0.0 || max_degree < 1) fail(errk::BadInput, "interpolation needs a positive radius and degree");
  const int samples = max_degree + 17;
  std::vector<std::complex<double>> values(samples);
  for (int j = 0; j < samples; ++j) values[j] = f(std::polar(radius, 2.0 * M_PI * j / samples));

  InterpolatedPolynomial p;
  p.radius = radius;
  p.coefficients.resize(samples);
  for (int k = 0; k < samples; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < samples; ++j) acc += values[j] * std::polar(1.0, -2.0 * M_PI * j * k / samples);
    p.coefficients[k] = acc / static_cast<double>(samples);
  }

  double coef_max = 0.0;
  for (const auto& c : p.coefficients) coef_max = std::max(coef_max, std::abs(c));
  if (coef_max == 0.0) fail(errk::DegenerateData, "interpolated polynomial vanished identically");
  for (int k = max_degree + 1; k < samples; ++k)
    p.tail = std::max(p.tail, std::abs(p.coefficients[k]) / coef_max);
  for (int k = 0; k <= max_degree; ++k)
    if (std::abs(p.coefficients[k]) > 1e-9 * coef_max) p.degree = k;
  p.coefficients.resize(static_cast<std::size_t>(max_degree) + 1);
  return p;
}

std::vector<std::complex<double>> polynomial_roots(const InterpolatedPolynomial& p) {
  const int degree = p.degree;
  if (degree < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int k = 0; k + 1 < degree; ++k) companion(k + 1, k) = 1.0;
  for (int k = 0; k < degree; ++k) companion(k, degree - 1) = -p.coefficients[k] / p.coefficients[degree];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
  if (es.info() != Eigen::Success) fail(errk::DegenerateData, "eigenvalue iteration failed on the companion matrix");
  std::vector<std::complex<double>> roots(degree);
  for (int k = 0; k < degree; ++k) roots[k] = p.radius * es.eigenvalues()(k);
  return roots;
}

K2nNumericResult emld_k2n_numeric(int n, std::uint64_t seed, double validation_tol) {
  if (n < 2) fail(errk::BadInput, "numeric critical count needs n >= 2");
  if (n > 24) fail(errk::TooLarge, "numeric critical count is limited to n <= 24");
  const int d = n + 2;

  CounterRng rng(seed);
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(d, d);
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    data(i, n) = data(n, i) = 1.0 + rng.uniform();
    data(i, n + 1) = data(n + 1, i) = 1.0 + rng.uniform();
    mean += data(i, n) + data(i, n + 1);
  }
  mean /= 2.0 * n;

  const int target_degree = 2 * n;
  const double radius = mean;
  InterpolatedPolynomial p = interpolate_polynomial(
      [&](std::complex<double> y) { return bipartite_critical_polynomial(data, n, y); }, radius, target_degree);

  K2nNumericResult res;
  res.n = n;
  res.coefficient_tail = p.tail;
  res.degree = p.degree;
  if (p.degree == 0) fail(errk::DegenerateData, "critical polynomial is constant for this draw");

  std::vector<std::complex<double>> roots;
  for (const auto& y : polynomial_roots(p)) {
    if (std::abs(y) < 1e-9 * radius) continue;  // the polynomial lives away from y = 0
    bool dup = false;
    for (const auto& seen : roots)
      if (std::abs(seen - y) <= 1e-6 * radius) {
        dup = true;
        break;
      }
    if (!dup) roots.push_back(y);
  }
  // Interpolated coefficients locate the roots to ~1e-9 of the radius, which
  // is too coarse for roots far inside the sampling circle; polish each one
  // with Newton steps on the determinant itself.
  const auto phi = [&](std::complex<double> y) { return bipartite_critical_polynomial(data, n, y); };
  for (auto& y : roots) {
    std::complex<double> cur = y;
    std::complex<double> val = phi(cur);
    for (int it = 0; it < 40; ++it) {
      const double h = 1e-7 * std::max(std::abs(cur), 1e-6 * radius);
      const std::complex<double> deriv = (phi(cur + h) - phi(cur - h)) / (2.0 * h);
      if (std::abs(deriv) == 0.0) break;
      std::complex<double> step = val / deriv;
      bool improved = false;
      for (int half = 0; half < 8; ++half, step *= 0.5) {
        const std::complex<double> next = cur - step;
        const std::complex<double> next_val = phi(next);
        if (std::abs(next_val) < std::abs(val)) {
          cur = next;
          val = next_val;
          improved = true;
          break;
        }
      }
      if (!improved || std::abs(step) <= 1e-15 * (1.0 + std::abs(cur))) break;
    }
    y = cur;
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  res.root_count = static_cast<int>(roots.size());

  for (const auto& y : roots) {
    K2nRoot entry;
    entry.y = y;
    Eigen::MatrixXcd gamma = bipartite_candidate(data, n, y);
    Eigen::MatrixXcd cm = Eigen::MatrixXcd::Zero(d + 1, d + 1);
    cm.topLeftCorner(d, d) = -0.5 * gamma;
    for (int v = 0; v < d; ++v) cm(v, d) = cm(d, v) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(cm);
    if (!lu.isInvertible()) {
      entry.nonedge_residual = std::numeric_limits<double>::infinity();
      res.roots.push_back(entry);
      continue;
    }
    Eigen::MatrixXcd theta = lu.inverse().topLeftCorner(d, d);
    double scale = theta.cwiseAbs().maxCoeff();
    double worst = std::abs(theta(n, n + 1));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(theta(i, j)));
    entry.nonedge_residual = worst / scale;
    entry.real = std::abs(y.imag()) <= 1e-8 * (1.0 + std::abs(y));
    if (entry.real && gamma.imag().cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + gamma.real().cwiseAbs().maxCoeff())) {
      CndCertificate cert = is_strictly_cnd(((gamma.real() + gamma.real().transpose()) / 2.0).eval());
      entry.strictly_cnd = cert.strict();
    }
    if (entry.nonedge_residual <= validation_tol) ++res.validated;
    res.roots.push_back(entry);
  }
  return res;
}

}  // namespace hrgm
