#include "hrgm/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hrgm/errors.hpp"
#include "hrgm/rng.hpp"

namespace hrgm {

namespace {

void require_strictly_cnd(const Eigen::MatrixXd& gamma, double tol) {
  CndCertificate cert = is_strictly_cnd(gamma, tol);
  if (!cert.strict()) fail(errk::NotStrictlyCND, "variogram is not strictly conditionally negative definite");
}

// Cholesky factor of the covariance based at k over the non-k coordinates.
Eigen::MatrixXd halfspace_chol(const Eigen::MatrixXd& gamma, int k) {
  Eigen::MatrixXd cov = covariance_mapping(gamma, k);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    fail(errk::SingularConditioning, "covariance based at the anchor is not positive definite");
  return llt.matrixL();
}

// One halfspace row; the anchor coordinate is exponential, the rest
// Gaussian. Draw order: exponential first, then the d-1 normals.
Eigen::RowVectorXd halfspace_row(const Eigen::MatrixXd& gamma, int k, const Eigen::MatrixXd& chol, CounterRng& rng) {
  const int d = static_cast<int>(gamma.rows());
  Eigen::RowVectorXd out(d);
  const double yk = rng.exponential();
  Eigen::VectorXd z(d - 1);
  for (int i = 0; i < d - 1; ++i) z(i) = rng.normal();
  Eigen::VectorXd rest = chol * z;
  int a = 0;
  for (int j = 1; j <= d; ++j) {
    if (j == k) {
      out(j - 1) = yk;
      continue;
    }
    out(j - 1) = yk - 0.5 * gamma(j - 1, k - 1) + rest(a);
    ++a;
  }
  return out;
}

}  // namespace

double log_exponent_density(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& y, double tol) {
  require_strictly_cnd(gamma, tol);
  const int d = static_cast<int>(gamma.rows());
  if (y.size() != d) fail(errk::BadInput, "point dimension does not match the variogram");

  Eigen::MatrixXd cm = cm_matrix(gamma);
  LogDet ld = log_abs_det(cm, tol);
  if (ld.sign != -1) fail(errk::SingularBorder, "bordered matrix determinant has the wrong sign");
  const double log_c1 = -0.5 * ((d - 1) * std::log(2.0 * M_PI) + ld.log_abs);

  Eigen::VectorXd rhs(d + 1);
  rhs.head(d) = y;
  rhs(d) = 1.0;
  Eigen::VectorXd x = cm.partialPivLu().solve(rhs);
  return log_c1 - 0.5 * rhs.dot(x);
}

ConditionalParams conditional_params(const Eigen::MatrixXd& gamma, const std::vector<int>& cond,
                                     const Eigen::VectorXd& y_cond, double tol) {
  require_strictly_cnd(gamma, tol);
  const int d = static_cast<int>(gamma.rows());
  std::vector<int> c = cond;
  std::sort(c.begin(), c.end());
  if (c.empty() || static_cast<int>(c.size()) >= d) fail(errk::BadInput, "conditioning set must be a proper nonempty subset");
  if (std::unique(c.begin(), c.end()) != c.end()) fail(errk::BadInput, "conditioning set has repeats");
  if (c.front() < 1 || c.back() > d) fail(errk::BadInput, "conditioning vertex out of range");
  if (y_cond.size() != static_cast<int>(c.size())) fail(errk::BadInput, "conditioned values do not match the set");

  ConditionalParams out;
  std::vector<bool> in_c(static_cast<std::size_t>(d) + 1, false);
  for (int v : c) in_c[static_cast<std::size_t>(v)] = true;
  for (int v = 1; v <= d; ++v)
    if (!in_c[static_cast<std::size_t>(v)]) out.free.push_back(v);

  const int a = static_cast<int>(out.free.size());
  const int s = static_cast<int>(c.size());
  Eigen::MatrixXd gamma_cc(s, s), gamma_ac(a, s), gamma_aa(a, a);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) gamma_cc(i, j) = gamma(c[i] - 1, c[j] - 1);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < s; ++j) gamma_ac(i, j) = gamma(out.free[i] - 1, c[j] - 1);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) gamma_aa(i, j) = gamma(out.free[i] - 1, out.free[j] - 1);

  Eigen::MatrixXd cm_cc = cm_matrix(gamma_cc);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(cm_cc);
  Eigen::MatrixXd w(a, s + 1);
  w.leftCols(s) = -0.5 * gamma_ac;
  w.col(s).setOnes();
  Eigen::MatrixXd solved = lu.solve(w.transpose());
  if (((cm_cc * solved - w.transpose()).cwiseAbs().maxCoeff()) >
      std::sqrt(tol) * std::max(1.0, w.cwiseAbs().maxCoeff()))
    fail(errk::SingularConditioning, "conditioning block is numerically singular");

  Eigen::VectorXd rhs(s + 1);
  rhs.head(s) = y_cond;
  rhs(s) = 1.0;
  out.mean = w * lu.solve(rhs);
  Eigen::MatrixXd cov = -0.5 * gamma_aa - w * solved;
  out.covariance = ((cov + cov.transpose()) / 2.0).eval();
  return out;
}

Eigen::MatrixXd sample_halfspace(const Eigen::MatrixXd& gamma, int k, int n, std::uint64_t seed, double tol) {
  require_strictly_cnd(gamma, tol);
  const int d = static_cast<int>(gamma.rows());
  if (k < 1 || k > d) fail(errk::BadInput, "anchor out of range");
  if (n < 0) fail(errk::BadInput, "sample count must be nonnegative");
  Eigen::MatrixXd chol = halfspace_chol(gamma, k);
  Eigen::MatrixXd rows(n, d);
  for (int l = 0; l < n; ++l) {
    CounterRng rng(seed, static_cast<std::uint64_t>(l));
    rows.row(l) = halfspace_row(gamma, k, chol, rng);
  }
  return rows;
}

Eigen::MatrixXd sample_pareto(const Eigen::MatrixXd& gamma, int n, std::uint64_t seed, double tol) {
  require_strictly_cnd(gamma, tol);
  const int d = static_cast<int>(gamma.rows());
  if (n < 0) fail(errk::BadInput, "sample count must be nonnegative");
  std::vector<Eigen::MatrixXd> chols;
  chols.reserve(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) chols.push_back(halfspace_chol(gamma, k));

  Eigen::MatrixXd rows(n, d);
  long long attempts = 0;
  const long long cap = 1000LL + 200LL * static_cast<long long>(d) * std::max(n, 1);
  int have = 0;
  while (have < n) {
    if (attempts >= cap) fail(errk::DegenerateSample, "rejection sampler exceeded its attempt budget");
    CounterRng rng(seed, static_cast<std::uint64_t>(attempts));
    ++attempts;
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    Eigen::RowVectorXd candidate = halfspace_row(gamma, k, chols[static_cast<std::size_t>(k - 1)], rng);
    int above = 0;
    for (int j = 0; j < d; ++j)
      if (candidate(j) >= 0.0) ++above;
    // above >= 1 always: the anchor coordinate is nonnegative.
    if (rng.uniform() * above < 1.0) {
      rows.row(have) = candidate;
      ++have;
    }
  }
  return rows;
}

Eigen::MatrixXd empirical_variogram(const Eigen::MatrixXd& rows, const EmpiricalVariogramOptions& opts) {
  const int n = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  if (n < 2 || d < 2) fail(errk::BadInput, "empirical variogram needs at least two rows and two columns");

  std::vector<std::vector<int>> anchored(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < n; ++l)
      if (rows(l, k) >= 0.0) anchored[static_cast<std::size_t>(k)].push_back(l);
    if (anchored[static_cast<std::size_t>(k)].size() < 2) {
      std::ostringstream os;
      os << "fewer than two rows exceed at coordinate " << (k + 1);
      fail(errk::InsufficientHalfspaceData, os.str());
    }
  }

  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      double acc = 0.0, wsum = 0.0;
      for (int k = 0; k < d; ++k) {
        const auto& idx = anchored[static_cast<std::size_t>(k)];
        const double count = static_cast<double>(idx.size());
        double mean = 0.0;
        for (int l : idx) mean += rows(l, i) - rows(l, j);
        mean /= count;
        double ss = 0.0;
        for (int l : idx) {
          const double diff = rows(l, i) - rows(l, j) - mean;
          ss += diff * diff;
        }
        const double var = ss / (opts.unbiased ? count - 1.0 : count);
        const double w = opts.weighted ? count - 1.0 : 1.0;
        acc += w * var;
        wsum += w;
      }
      gamma(i, j) = gamma(j, i) = acc / wsum;
    }
  }
  return gamma;
}

ExceedanceResult threshold_exceedances(const Eigen::MatrixXd& rows, double q) {
  if (!(q > 0.0 && q < 1.0)) fail(errk::BadInput, "quantile level must lie strictly between 0 and 1");
  ExceedanceResult out;
  out.threshold = -std::log1p(-q);
  out.total = static_cast<int>(rows.rows());
  std::vector<int> keep;
  for (int l = 0; l < rows.rows(); ++l)
    if (rows.row(l).maxCoeff() > out.threshold) keep.push_back(l);
  if (keep.empty()) fail(errk::EmptyExceedanceSet, "no row exceeds the threshold");
  out.rows.resize(static_cast<int>(keep.size()), rows.cols());
  for (std::size_t t = 0; t < keep.size(); ++t)
    out.rows.row(static_cast<int>(t)) = rows.row(keep[t]).array() - out.threshold;
  return out;
}

Eigen::MatrixXd rank_transform(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  if (n < 1) fail(errk::BadInput, "rank transform needs at least one row");
  Eigen::MatrixXd out(n, d);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rows(a, j) < rows(b, j); });
    for (int r = 0; r < n; ++r) out(order[static_cast<std::size_t>(r)], j) = -std::log1p(-(r + 1.0) / (n + 1.0));
  }
  return out;
}

}  // namespace hrgm
