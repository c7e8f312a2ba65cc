#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "wavedisp/shear.hpp"
#include "wavedisp/spectral.hpp"

namespace wavedisp::collocation {

/// A w = mu B w with the free-surface row first; B = diag(0, 1, ..., 1).
/// Backward (CL-k) problem: c is the parameter, mu = k^2 the eigenvalue.
struct GeneralizedPencil {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  double c = 0.0;
};

/// (c^2 A2 + c A1 + A0) w = 0 with the free-surface row first. A2 has rank 1.
/// Forward (CL-c) problem: k is the parameter, c the eigenvalue.
struct QuadraticPencil {
  Eigen::MatrixXd a2, a1, a0;
  double k = 0.0;
};

/// One point of the dispersion relation: {k, c, w}. The eigenvector has unit
/// Euclidean norm with real nonnegative surface component.
struct EigenSolution {
  double k = 0.0;
  double c = 0.0;
  Eigen::VectorXcd w;
  bool normalized = false;
  bool critical_layer_warning = false;
  bool near_essential_warning = false;
  double essential_gap = 0.0;  // c - U_max

  /// Real part of w; throws if the imaginary part is not negligible.
  Eigen::VectorXd real_eigenvector(double tol = 1e-8) const;
};

struct SolveOptions {
  double magnitude_cutoff = 1e8;
  double imag_tol = 1e-6;
  int essential_samples = 512;  // sampling density for branch filtering
};

GeneralizedPencil assemble_backward(const shear::ReducedProfile& profile,
                                    const spectral::CollocationOperator& op, double c);

/// Solves the backward problem: returns k = sqrt(mu_1) for the unique
/// positive eigenvalue mu_1.
EigenSolution solve_backward(const shear::ReducedProfile& profile,
                             const spectral::CollocationOperator& op, double c,
                             const SolveOptions& opts = {});

QuadraticPencil assemble_forward(const shear::ReducedProfile& profile,
                                 const spectral::CollocationOperator& op, double k);

struct QuadraticEigenPair {
  std::complex<double> c;
  Eigen::VectorXcd w;
};

/// All finite eigenpairs of the quadratic pencil via first companion
/// linearisation and dense QZ.
std::vector<QuadraticEigenPair> solve_quadratic(const QuadraticPencil& pencil);

/// Drops non-finite / spurious / complex pairs and returns the greatest real
/// c (the propagating branch). Attaches critical-layer and small-gap warnings
/// relative to the given essential range.
EigenSolution select_branch(const std::vector<QuadraticEigenPair>& pairs,
                            const shear::EssentialRange& essential, double k,
                            const SolveOptions& opts = {});

/// assemble_forward + solve_quadratic + select_branch + normalisation.
EigenSolution solve_forward(const shear::ReducedProfile& profile,
                            const spectral::CollocationOperator& op, double k,
                            const SolveOptions& opts = {});

/// Velocity and pressure perturbation amplitudes on the full grid, from the
/// eigenfunction of a solved mode (density = 1).
struct FlowField {
  Eigen::VectorXcd u, v, p;  // horizontal velocities and pressure
  Eigen::VectorXcd w;        // vertical velocity on the full grid (bottom = 0)
  Eigen::VectorXcd dw;       // dw/dz on the full grid
};
FlowField reconstruct_flow(const shear::ShearProfile& profile, double kx, double ky,
                           const EigenSolution& solution,
                           const spectral::CollocationOperator& op);

/// Phase-fix and normalise: unit 2-norm, surface component real nonnegative.
Eigen::VectorXcd normalize_eigenvector(const Eigen::VectorXcd& w);

}  // namespace wavedisp::collocation
