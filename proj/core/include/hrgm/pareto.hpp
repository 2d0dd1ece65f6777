#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hrgm/varalg.hpp"

namespace hrgm {

// Log density of the exponent measure at y (exponential margins).
double log_exponent_density(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& y, double tol = default_tol());

// Gaussian law of the free coordinates of the exponent measure given the
// conditioned ones.
struct ConditionalParams {
  std::vector<int> free;  // 1-based, ascending
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};
ConditionalParams conditional_params(const Eigen::MatrixXd& gamma, const std::vector<int>& cond,
                                     const Eigen::VectorXd& y_cond, double tol = default_tol());

// n rows with coordinate k standard exponential and the rest Gaussian around
// y_k - Gamma_{., k} / 2 with the covariance based at k. Row l is driven by
// stream l of the seed, so prefixes agree across different n.
Eigen::MatrixXd sample_halfspace(const Eigen::MatrixXd& gamma, int k, int n, std::uint64_t seed,
                                 double tol = default_tol());

// n rows of the multivariate Pareto distribution: uniform mixture over the
// halfspace samplers with acceptance 1 / #{j : y_j >= 0}. Attempt a is driven
// by stream a of the seed.
Eigen::MatrixXd sample_pareto(const Eigen::MatrixXd& gamma, int n, std::uint64_t seed, double tol = default_tol());

struct EmpiricalVariogramOptions {
  bool unbiased = true;   // divide difference variances by count - 1
  bool weighted = false;  // weight anchors by exceedance count - 1
};

// Average over anchors k of the variance of coordinate differences on the
// rows whose k-th coordinate is nonnegative.
Eigen::MatrixXd empirical_variogram(const Eigen::MatrixXd& rows, const EmpiricalVariogramOptions& opts = {});

// Rows whose maximum coordinate exceeds u = -log(1 - q), shifted down by u.
struct ExceedanceResult {
  Eigen::MatrixXd rows;
  double threshold = 0.0;
  int total = 0;  // rows before thresholding
};
ExceedanceResult threshold_exceedances(const Eigen::MatrixXd& rows, double q);

// Componentwise transform to standard exponential margins via ordinal ranks:
// -log(1 - rank / (n + 1)).
Eigen::MatrixXd rank_transform(const Eigen::MatrixXd& rows);

}  // namespace hrgm
