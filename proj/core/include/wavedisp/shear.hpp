#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "wavedisp/spectral.hpp"

namespace wavedisp::shear {

using ScalarFn = std::function<double(double)>;

/// Two-component shear profile U(z) = (U_x, U_y) on z in [-1, 0] with analytic
/// first and second derivatives and squared Froude number. Density is 1
/// throughout (nondimensional formulation).
struct ShearProfile {
  ScalarFn ux, dux, ddux;
  ScalarFn uy, duy, dduy;
  double froude_sq = 0.05;
  std::string name;
};

/// Scalar profile obtained by projecting a ShearProfile along a wave-vector
/// direction, or any directly supplied scalar profile.
struct ReducedProfile {
  ScalarFn u, du, ddu;
  double froude_sq = 0.05;
  double angle = 0.0;
  std::string name;
};

struct UtParams {
  double alpha = 2.0;
  double beta = 4.0 * M_PI;
  double gamma = 1.0;
  double delta = 0.5;
};

/// Built-in profiles: "UT" (oscillatory test profile), "quiescent",
/// "linear" (a(z+1)+b), "polynomial" (see make_polynomial_profile).
ShearProfile builtin_profile(const std::string& name, double froude_sq = 0.05);
ShearProfile ut_profile(const UtParams& p = {}, double froude_sq = 0.05);
ShearProfile quiescent_profile(double froude_sq = 0.05);
ShearProfile linear_profile(double a, double b, double froude_sq = 0.05);

/// U_x(z) = sum_i cx[i] z^i, likewise U_y; either list may be empty (zero).
ShearProfile make_polynomial_profile(const std::vector<double>& cx,
                                     const std::vector<double>& cy,
                                     double froude_sq,
                                     const std::string& name = "polynomial");

/// Combine two scalar x-profiles into a two-component profile.
ShearProfile compose_profile(const ShearProfile& x_component,
                             const ShearProfile& y_component);

/// U_theta = cos(theta) U_x + sin(theta) U_y.
ReducedProfile project(const ShearProfile& p, double theta);

/// d/dtheta of project: -sin(theta) U_x + cos(theta) U_y.
ReducedProfile angular_derivative(const ShearProfile& p, double theta);

/// View of a ShearProfile already reduced (reduced problem input).
ReducedProfile as_reduced(const ShearProfile& p);

/// Profile and derivatives evaluated on a collocation grid.
struct SampledShear {
  Eigen::VectorXd u, du, ddu;  // length N_z + 1, surface first
};
SampledShear sample(const ReducedProfile& p, const spectral::CollocationOperator& op);

/// Both velocity components and their derivatives on a collocation grid.
/// Directional resampling then reduces to a rotation of fixed vectors.
struct SampledShear2D {
  Eigen::VectorXd ux, dux, ddux, uy, duy, dduy;
};
SampledShear2D sample(const ShearProfile& p, const spectral::CollocationOperator& op);

/// Directional samples cos(theta) U_x + sin(theta) U_y.
SampledShear project(const SampledShear2D& s, double theta);

/// Samples of the theta-derivative profile -sin(theta) U_x + cos(theta) U_y.
SampledShear angular_derivative(const SampledShear2D& s, double theta);

/// Rows 2..N_z of a grid vector (drops surface and bottom entries).
Eigen::VectorXd interior(const Eigen::VectorXd& grid_vector);

/// [U_min, U_max] of the profile over [-1, 0], by dense sampling plus
/// golden-section refinement.
struct EssentialRange {
  double lo = 0.0;
  double hi = 0.0;
};
EssentialRange essential_range(const ReducedProfile& p, int samples = 10000);

}  // namespace wavedisp::shear
