#pragma once

#include <Eigen/Dense>
#include <string>

namespace hrgm {

// Default relative tolerance; HR_TOL in the environment overrides it.
// Tolerances are always interpreted relative to the largest singular value
// (or largest absolute entry, where a determinant-free scale is needed) of
// the matrix in question.
double default_tol();

// Validation (throws on violation).
void check_square(const Eigen::MatrixXd& m, const char* what);
void check_symmetric(const Eigen::MatrixXd& m, const char* what, double tol = default_tol());
// Variogram: symmetric with zero diagonal.
void check_variogram(const Eigen::MatrixXd& gamma, double tol = default_tol());
// Signed Laplacian: symmetric with zero row sums.
void check_signed_laplacian(const Eigen::MatrixXd& theta, double tol = default_tol());

// Bordered matrices. cm_matrix is [[-G/2, 1], [1^T, 0]]; cm_tilde is
// [[G, 1], [1^T, 0]] and satisfies det cm_tilde = (-2)^(d-1) det cm_matrix.
Eigen::MatrixXd cm_matrix(const Eigen::MatrixXd& gamma);
Eigen::MatrixXd cm_tilde(const Eigen::MatrixXd& gamma);
// Rectangular variant used by the conditional independence rank tests:
// [[-B/2, 1], [1^T, 0]] for an arbitrary (not necessarily square) block B.
Eigen::MatrixXd cm_matrix_rect(const Eigen::MatrixXd& block);
Eigen::MatrixXcd cm_tilde_complex(const Eigen::MatrixXcd& gamma);

// Deterministic d x (d-1) orthonormal basis of the orthogonal complement of
// the all-ones vector (Householder construction).
Eigen::MatrixXd oneperp_basis(int d);

// log|det| and sign via LU; sign is 0 for numerically singular input.
struct LogDet {
  double log_abs = 0.0;
  int sign = 0;
};
LogDet log_abs_det(const Eigen::MatrixXd& m, double tol = default_tol());

// Conditional negative definiteness certificate. Eigenvalues are those of
// sigma_of_gamma restricted to the complement of the ones vector, ascending.
// status: "strict" (all > tol*scale), "weak" (boundary), "none" (indefinite).
struct CndCertificate {
  std::string status;
  double margin = 0.0;  // smallest eigenvalue divided by the largest magnitude
  double tolerance = 0.0;
  Eigen::VectorXd eigenvalues;
  bool strict() const { return status == "strict"; }
  bool cnd() const { return status != "none"; }
};
CndCertificate is_strictly_cnd(const Eigen::MatrixXd& gamma, double tol = default_tol());

// Gamma -> Theta: the upper-left d x d block of cm_matrix(gamma)^{-1},
// computed as the pseudo-inverse of sigma_of_gamma restricted to the
// complement of the ones vector. Requires strict conditional negative
// definiteness.
Eigen::MatrixXd theta_of_gamma(const Eigen::MatrixXd& gamma, double tol = default_tol());

// Gamma -> Sigma: P (-gamma/2) P with P the centering projector,
// re-symmetrized and re-projected.
Eigen::MatrixXd sigma_of_gamma(const Eigen::MatrixXd& gamma);

// Sigma -> Gamma: diag 1^T + 1 diag^T - 2 Sigma. Requires the ones vector in
// the kernel of Sigma (KernelViolation otherwise). Output diagonal is zeroed
// explicitly.
Eigen::MatrixXd gamma_of_sigma(const Eigen::MatrixXd& sigma, double tol = default_tol());

// Pseudo-inverse of a symmetric PSD matrix whose kernel contains the ones
// vector, computed on that complement only.
Eigen::MatrixXd pseudo_inverse_oneperp(const Eigen::MatrixXd& m, double tol = default_tol());

// Rank-revealing Gram factorization of sigma_of_gamma(gamma): sigma = b^T b
// with b of shape rank x d. Eigenvector sign convention: first nonzero
// coordinate positive; rows ordered by decreasing eigenvalue.
struct GramFactor {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd b;
  int rank = 0;
  Eigen::VectorXd diag;  // diagonal of sigma
};
GramFactor gram_factor(const Eigen::MatrixXd& gamma, double tol = default_tol());

// Covariance mapping at base vertex k (1-based): the (d-1) x (d-1) matrix
// with entries (gamma_ik + gamma_jk - gamma_ij) / 2, indexed by V \ {k} in
// increasing order.
Eigen::MatrixXd covariance_mapping(const Eigen::MatrixXd& gamma, int k);

// Rank of sigma_of_gamma under the shared tolerance. Requires gamma CND.
int dimensionality(const Eigen::MatrixXd& gamma, double tol = default_tol());

// Bordered inverse decomposition: [[theta, p], [p^T, r2]] = cm_matrix(gamma)^{-1}
// with p = theta diag(sigma)/2 + 1/d and
// r2 = diag(sigma)^T theta diag(sigma)/4 + 1^T diag(sigma)/d.
// residual is the max-abs entry of the product against the identity.
struct BorderedInverse {
  Eigen::MatrixXd theta;
  Eigen::VectorXd p;
  double r2 = 0.0;
  double residual = 0.0;
};
BorderedInverse bordered_inverse(const Eigen::MatrixXd& gamma, double tol = default_tol());

// Product of the d-1 eigenvalues of theta away from the ones kernel.
// Requires PSD with zero row sums and rank exactly d-1 (RankDeficient
// otherwise). log variant for use inside likelihood objectives.
double pseudo_determinant(const Eigen::MatrixXd& theta, double tol = default_tol());
double log_pseudo_determinant(const Eigen::MatrixXd& theta, double tol = default_tol());

}  // namespace hrgm
