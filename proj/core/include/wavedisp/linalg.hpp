#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace wavedisp::linalg {

struct GeneralizedEigenResult {
  Eigen::VectorXcd alpha;          // eigenvalue numerators
  Eigen::VectorXd beta;            // eigenvalue denominators (beta == 0: infinite)
  Eigen::MatrixXcd right_vectors;  // columns
  Eigen::MatrixXcd left_vectors;   // columns; empty unless requested
};

/// Dense QZ solve of A x = lambda B x (LAPACK dggev behind the scenes).
/// Thread-safe: each call owns its workspace.
GeneralizedEigenResult generalized_eig(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b,
                                       bool want_left = false);

}  // namespace wavedisp::linalg
