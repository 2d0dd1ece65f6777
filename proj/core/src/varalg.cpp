#include "hrgm/varalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "hrgm/errors.hpp"

namespace hrgm {

double default_tol() {
  static const double cached = [] {
    if (const char* env = std::getenv("HR_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && v > 0.0) return v;
    }
    return 1e-8;
  }();
  return cached;
}

void check_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(errk::BadInput, std::string(what) + " must be square and nonempty");
}

void check_symmetric(const Eigen::MatrixXd& m, const char* what, double tol) {
  check_square(m, what);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    fail(errk::NotSymmetric, std::string(what) + " is not symmetric");
}

void check_variogram(const Eigen::MatrixXd& gamma, double tol) {
  check_symmetric(gamma, "variogram", tol);
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if (gamma.diagonal().cwiseAbs().maxCoeff() > tol * scale)
    fail(errk::NonzeroDiagonal, "variogram diagonal must vanish");
}

void check_signed_laplacian(const Eigen::MatrixXd& theta, double tol) {
  check_symmetric(theta, "signed Laplacian", tol);
  const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
  if ((theta * Eigen::VectorXd::Ones(theta.rows())).cwiseAbs().maxCoeff() > tol * scale)
    fail(errk::KernelViolation, "signed Laplacian must have zero row sums");
}

Eigen::MatrixXd cm_matrix(const Eigen::MatrixXd& gamma) {
  check_square(gamma, "variogram");
  const Eigen::Index d = gamma.rows();
  Eigen::MatrixXd m(d + 1, d + 1);
  m.topLeftCorner(d, d) = -0.5 * gamma;
  m.topRightCorner(d, 1).setOnes();
  m.bottomLeftCorner(1, d).setOnes();
  m(d, d) = 0.0;
  return m;
}

Eigen::MatrixXd cm_tilde(const Eigen::MatrixXd& gamma) {
  check_square(gamma, "variogram");
  const Eigen::Index d = gamma.rows();
  Eigen::MatrixXd m(d + 1, d + 1);
  m.topLeftCorner(d, d) = gamma;
  m.topRightCorner(d, 1).setOnes();
  m.bottomLeftCorner(1, d).setOnes();
  m(d, d) = 0.0;
  return m;
}

Eigen::MatrixXd cm_matrix_rect(const Eigen::MatrixXd& block) {
  const Eigen::Index r = block.rows(), c = block.cols();
  if (r == 0 || c == 0) fail(errk::BadInput, "bordered block must be nonempty");
  Eigen::MatrixXd m(r + 1, c + 1);
  m.topLeftCorner(r, c) = -0.5 * block;
  m.topRightCorner(r, 1).setOnes();
  m.bottomLeftCorner(1, c).setOnes();
  m(r, c) = 0.0;
  return m;
}

Eigen::MatrixXcd cm_tilde_complex(const Eigen::MatrixXcd& gamma) {
  const Eigen::Index d = gamma.rows();
  if (d != gamma.cols() || d == 0) fail(errk::BadInput, "bordered block must be square");
  Eigen::MatrixXcd m(d + 1, d + 1);
  m.topLeftCorner(d, d) = gamma;
  m.topRightCorner(d, 1).setOnes();
  m.bottomLeftCorner(1, d).setOnes();
  m(d, d) = 0.0;
  return m;
}

Eigen::MatrixXd oneperp_basis(int d) {
  if (d < 1) fail(errk::BadInput, "dimension must be positive");
  // Householder reflector swapping e_1 and the normalized ones vector; its
  // trailing d-1 columns span the complement of ones.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  Eigen::VectorXd u = v;
  u(0) -= 1.0;
  const double nrm = u.norm();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
  if (nrm > 0) {
    u /= nrm;
    h -= 2.0 * u * u.transpose();
  }
  return h.rightCols(d - 1);
}

LogDet log_abs_det(const Eigen::MatrixXd& m, double tol) {
  check_square(m, "determinant input");
  (void)tol;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::VectorXd diag = lu.matrixLU().diagonal();
  LogDet out;
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double v = diag(i);
    if (v == 0.0) return {0.0, 0};
    if (v < 0) sign = -sign;
    out.log_abs += std::log(std::abs(v));
  }
  out.sign = sign;
  return out;
}

namespace {

// Eigenvalues of sigma_of_gamma restricted to the complement of ones,
// ascending, together with the eigenvectors lifted back to R^d.
struct OnePerpEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // d x (d-1), columns lifted
};

OnePerpEigen oneperp_eigen(const Eigen::MatrixXd& gamma) {
  const int d = static_cast<int>(gamma.rows());
  if (d == 1) return {Eigen::VectorXd(0), Eigen::MatrixXd(1, 0)};
  const Eigen::MatrixXd u = oneperp_basis(d);
  const Eigen::MatrixXd m = u.transpose() * (-0.5 * gamma) * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  return {es.eigenvalues(), u * es.eigenvectors()};
}

}  // namespace

CndCertificate is_strictly_cnd(const Eigen::MatrixXd& gamma, double tol) {
  check_variogram(gamma, tol);
  CndCertificate cert;
  cert.tolerance = tol;
  const auto eig = oneperp_eigen(gamma);
  cert.eigenvalues = eig.values;
  if (eig.values.size() == 0) {  // d = 1: no directions to test
    cert.status = "strict";
    cert.margin = 1.0;
    return cert;
  }
  const double lo = eig.values.minCoeff();
  const double scale = std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  cert.margin = lo / scale;
  if (lo > tol * scale)
    cert.status = "strict";
  else if (lo >= -tol * scale)
    cert.status = "weak";
  else
    cert.status = "none";
  return cert;
}

Eigen::MatrixXd sigma_of_gamma(const Eigen::MatrixXd& gamma) {
  check_square(gamma, "variogram");
  const Eigen::Index d = gamma.rows();
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(d, d) - Eigen::MatrixXd::Constant(d, d, 1.0 / static_cast<double>(d));
  Eigen::MatrixXd s = p * (-0.5 * gamma) * p;
  s = 0.5 * (s + s.transpose()).eval();
  s = (p * s * p).eval();  // re-project: keeps ones exactly in the kernel
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd theta_of_gamma(const Eigen::MatrixXd& gamma, double tol) {
  const auto cert = is_strictly_cnd(gamma, tol);
  if (!cert.strict())
    fail(errk::NotStrictlyCND, "conversion to a signed Laplacian needs a strictly CND variogram (margin " +
                                   std::to_string(cert.margin) + ")");
  const auto eig = oneperp_eigen(gamma);
  const Eigen::Index k = eig.values.size();
  if (k == 0) return Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(gamma.rows(), gamma.rows());
  for (Eigen::Index i = 0; i < k; ++i)
    theta += (1.0 / eig.values(i)) * eig.vectors.col(i) * eig.vectors.col(i).transpose();
  return 0.5 * (theta + theta.transpose());
}

Eigen::MatrixXd gamma_of_sigma(const Eigen::MatrixXd& sigma, double tol) {
  check_symmetric(sigma, "Gram matrix", tol);
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma * Eigen::VectorXd::Ones(sigma.rows())).cwiseAbs().maxCoeff() > tol * scale)
    fail(errk::KernelViolation, "Gram matrix must annihilate the ones vector");
  const Eigen::VectorXd d = sigma.diagonal();
  Eigen::MatrixXd gamma = d * Eigen::RowVectorXd::Ones(sigma.cols()) +
                          Eigen::VectorXd::Ones(sigma.rows()) * d.transpose() - 2.0 * sigma;
  gamma.diagonal().setZero();
  return 0.5 * (gamma + gamma.transpose());
}

Eigen::MatrixXd pseudo_inverse_oneperp(const Eigen::MatrixXd& m, double tol) {
  check_symmetric(m, "pseudo-inverse input", tol);
  const int d = static_cast<int>(m.rows());
  if (d == 1) return Eigen::MatrixXd::Zero(1, 1);
  const Eigen::MatrixXd u = oneperp_basis(d);
  const Eigen::MatrixXd red = u.transpose() * m * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (red + red.transpose()));
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (std::abs(lam) <= tol * scale)
      fail(errk::RankDeficient, "pseudo-inverse input drops rank on the ones complement");
    const Eigen::VectorXd v = u * es.eigenvectors().col(i);
    inv += (1.0 / lam) * v * v.transpose();
  }
  return 0.5 * (inv + inv.transpose());
}

GramFactor gram_factor(const Eigen::MatrixXd& gamma, double tol) {
  check_variogram(gamma, tol);
  GramFactor out;
  out.sigma = sigma_of_gamma(gamma);
  out.diag = out.sigma.diagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.sigma);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol * scale) keep.push_back(i);
  out.rank = static_cast<int>(keep.size());
  out.b.resize(out.rank, gamma.rows());
  // Decreasing eigenvalue order; sign fixed by the first nonzero coordinate.
  std::reverse(keep.begin(), keep.end());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    Eigen::VectorXd v = es.eigenvectors().col(keep[r]);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.b.row(static_cast<Eigen::Index>(r)) = std::sqrt(es.eigenvalues()(keep[r])) * v.transpose();
  }
  return out;
}

Eigen::MatrixXd covariance_mapping(const Eigen::MatrixXd& gamma, int k) {
  check_variogram(gamma);
  const int d = static_cast<int>(gamma.rows());
  if (k < 1 || k > d) fail(errk::BadInput, "base vertex out of range");
  Eigen::MatrixXd s(d - 1, d - 1);
  int a = 0;
  for (int i = 1; i <= d; ++i) {
    if (i == k) continue;
    int b = 0;
    for (int j = 1; j <= d; ++j) {
      if (j == k) continue;
      s(a, b) = 0.5 * (gamma(i - 1, k - 1) + gamma(j - 1, k - 1) - gamma(i - 1, j - 1));
      ++b;
    }
    ++a;
  }
  return 0.5 * (s + s.transpose());
}

int dimensionality(const Eigen::MatrixXd& gamma, double tol) {
  const auto cert = is_strictly_cnd(gamma, tol);
  if (!cert.cnd()) fail(errk::NotCND, "dimensionality is defined for CND variograms only");
  if (cert.eigenvalues.size() == 0) return 0;
  const double scale = std::max(cert.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  int rank = 0;
  for (Eigen::Index i = 0; i < cert.eigenvalues.size(); ++i)
    if (cert.eigenvalues(i) > tol * scale) ++rank;
  return rank;
}

BorderedInverse bordered_inverse(const Eigen::MatrixXd& gamma, double tol) {
  BorderedInverse out;
  out.theta = theta_of_gamma(gamma, tol);
  const Eigen::MatrixXd sigma = sigma_of_gamma(gamma);
  const Eigen::Index d = gamma.rows();
  const Eigen::VectorXd ds = sigma.diagonal();
  out.p = 0.5 * out.theta * ds + Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  out.r2 = 0.25 * ds.dot(out.theta * ds) + ds.sum() / static_cast<double>(d);
  Eigen::MatrixXd bordered(d + 1, d + 1);
  bordered.topLeftCorner(d, d) = out.theta;
  bordered.topRightCorner(d, 1) = out.p;
  bordered.bottomLeftCorner(1, d) = out.p.transpose();
  bordered(d, d) = out.r2;
  out.residual =
      (bordered * cm_matrix(gamma) - Eigen::MatrixXd::Identity(d + 1, d + 1)).cwiseAbs().maxCoeff();
  if (out.residual > std::sqrt(tol))
    fail(errk::SingularBorder, "bordered inverse residual " + std::to_string(out.residual));
  return out;
}

namespace {

Eigen::VectorXd laplacian_spectrum_oneperp(const Eigen::MatrixXd& theta, double tol) {
  check_signed_laplacian(theta, tol);
  const int d = static_cast<int>(theta.rows());
  if (d == 1) return Eigen::VectorXd(0);
  const Eigen::MatrixXd u = oneperp_basis(d);
  const Eigen::MatrixXd m = u.transpose() * theta * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd vals = es.eigenvalues();
  const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  if (vals.minCoeff() < -tol * scale)
    fail(errk::NotCND, "Laplacian is not positive semidefinite");
  if (vals.minCoeff() <= tol * scale)
    fail(errk::RankDeficient, "Laplacian rank below d-1");
  return vals;
}

}  // namespace

double pseudo_determinant(const Eigen::MatrixXd& theta, double tol) {
  const Eigen::VectorXd vals = laplacian_spectrum_oneperp(theta, tol);
  double prod = 1.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) prod *= vals(i);
  return prod;
}

double log_pseudo_determinant(const Eigen::MatrixXd& theta, double tol) {
  const Eigen::VectorXd vals = laplacian_spectrum_oneperp(theta, tol);
  double s = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) s += std::log(vals(i));
  return s;
}

}  // namespace hrgm
