#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrgm/graph.hpp"

namespace hrgm {

// Closed-form extremal maximum likelihood degrees for the structured graph
// families, with the Gaussian counterpart where it is known.
struct DegreeReport {
  std::string family;  // chordal | cycle | complete-bipartite | suspension | separable | unknown
  std::optional<long long> emld;
  std::optional<long long> mld;
  std::string method;
  std::string notes;
};

DegreeReport extremal_ml_degree(const Graph& g);

// Cycle formulas, n >= 3 (n <= 62 to stay inside 64-bit integers).
long long emld_cycle(int n);          // 2^{n-1} - n
long long mld_gaussian_cycle(int n);  // (n-3) 2^{n-2} + 1

// Both printed cycle identities:
//   mld(n) - emld(n) == 2^{n-2} (n-5) + n + 1           (n >= 3)
//   mld(n) == emld(n)^2 - emld(n-1) emld(n+1)           (n >= 4)
bool mld_relations_check(int n);

// Numeric critical-point count for K_{2,n} with generic edge data: the score
// equations reduce to a degree-2n polynomial in the missing entry between the
// two-vertex side, and every root lifts to a completed matrix whose Laplacian
// vanishes off the edge set.
struct K2nRoot {
  std::complex<double> y;       // candidate value of the missing two-side entry
  double nonedge_residual = 0;  // max |Theta| over nonedges, relative
  bool real = false;
  bool strictly_cnd = false;  // for real roots: whether the completion is a model point
};

struct K2nNumericResult {
  int n = 0;
  int degree = 0;       // degree of the critical polynomial (expected 2n)
  int root_count = 0;   // distinct roots
  int validated = 0;    // roots passing the nonedge residual check
  std::vector<K2nRoot> roots;
  double coefficient_tail = 0;  // relative size of coefficients above degree 2n
};

K2nNumericResult emld_k2n_numeric(int n, std::uint64_t seed, double validation_tol = 1e-6);

// Polynomial recovered from samples of f on the circle |y| = radius.
// Coefficients are in the scaled variable y / radius; tail is the relative
// coefficient mass above max_degree, which should be noise when f really is a
// polynomial of at most that degree.
struct InterpolatedPolynomial {
  std::vector<std::complex<double>> coefficients;
  double radius = 1.0;
  int degree = 0;
  double tail = 0.0;
};
InterpolatedPolynomial interpolate_polynomial(const std::function<std::complex<double>(std::complex<double>)>& f,
                                              double radius, int max_degree);

// Roots in the original variable, via the companion matrix of the detected-
// degree truncation.
std::vector<std::complex<double>> polynomial_roots(const InterpolatedPolynomial& p);

// Complete bipartite family with parts {1..n} and {n+1, n+2}: candidate
// completion at a given value y of the missing two-side entry (the entries
// inside the n-side are forced), and the critical polynomial in y whose roots
// make the completed Laplacian vanish on the remaining nonedge. data holds
// the edge entries of the variogram, 0-based.
Eigen::MatrixXcd bipartite_candidate(const Eigen::MatrixXd& data, int n, std::complex<double> y);
std::complex<double> bipartite_critical_polynomial(const Eigen::MatrixXd& data, int n, std::complex<double> y);

}  // namespace hrgm
