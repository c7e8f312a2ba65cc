#pragma once

#include <Eigen/Dense>

namespace wavedisp::spectral {

/// Chebyshev--Gauss--Lobatto collocation grid together with its first and
/// second spectral differentiation matrices. Nodes are stored surface-first
/// (strictly decreasing); after map_to_depth the grid covers [-h, 0].
struct CollocationOperator {
  int order = 0;            // N_z; grid has order+1 nodes
  double depth = 2.0;       // interval length; 2 for the raw [-1,1] operator
  Eigen::VectorXd nodes;    // z_j, descending
  Eigen::MatrixXd d1;       // first-derivative matrix, (N_z+1)^2
  Eigen::MatrixXd d2;       // second-derivative matrix
};

/// CGL points cos((j-1)pi/N_z), j = 1..N_z+1, on [-1,1], descending.
Eigen::VectorXd cgl_points(int order);

/// Spectral differentiation matrices on an arbitrary set of distinct nodes,
/// built from barycentric weights. Diagonals come from the negative sum
/// trick, accumulated in order of increasing off-diagonal magnitude.
struct DiffMatrices {
  Eigen::MatrixXd d1;
  Eigen::MatrixXd d2;
};
DiffMatrices diff_matrices(const Eigen::VectorXd& nodes);

/// Operator on the CGL grid over [-1,1].
CollocationOperator make_operator(int order);

/// Change of variable z = (h/2)(zeta - 1): nodes map to [-h, 0], derivative
/// matrices pick up chain-rule factors (2/h) and (2/h)^2.
CollocationOperator map_operator(const CollocationOperator& op, double h);

/// Barycentric Lagrange evaluation of the interpolating polynomial through
/// (nodes, values) at the query points. A query that coincides with a node
/// returns the stored value.
Eigen::VectorXd barycentric_eval(const Eigen::VectorXd& nodes,
                                 const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& queries);
Eigen::VectorXcd barycentric_eval(const Eigen::VectorXd& nodes,
                                  const Eigen::VectorXcd& values,
                                  const Eigen::VectorXd& queries);

/// Chebyshev series coefficients of the polynomial interpolating the given
/// values on the descending CGL grid (direct cosine sum, O(N^2)).
Eigen::VectorXd cheb_coefficients(const Eigen::VectorXd& values);

struct ConvergenceReport {
  bool converged = false;
  int required_order = 0;  // first index at which the envelope enters the plateau
  double plateau_level = 0.0;
};

/// Detects the roundoff plateau of a Chebyshev coefficient sequence: builds
/// the monotone envelope of |a_j|, histograms the log-magnitudes, and takes
/// the dominant bin among those below the given quantile as the plateau.
ConvergenceReport series_convergence(const Eigen::VectorXd& coefficients,
                                     double noise_floor_quantile = 0.5,
                                     int bins = 16);

}  // namespace wavedisp::spectral
