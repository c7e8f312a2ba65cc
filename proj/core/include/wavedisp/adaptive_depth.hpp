#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wavedisp/path_following.hpp"
#include "wavedisp/shear.hpp"
#include "wavedisp/spectral.hpp"

namespace wavedisp::depth {

/// Effective depth at which e^{kz} decays below delta: min{1, -ln(delta)/k}.
double h_delta(double k, double delta);

/// Overlapping k-subintervals with per-interval depths for short-wave runs.
struct DepthPlan {
  struct Interval {
    double k_lo = 0.0;
    double k_hi = 0.0;
    double h = 1.0;
  };
  double delta = 0.0;
  double c_min = 0.3;
  double c_max = 0.8;
  std::vector<Interval> intervals;
};

/// Geometric interval sequence: I0 = [0, L/Cmax] at full depth, then
/// I_j = [L/Cmin^{j-1}, L/(Cmin^j Cmax)] with h_j = min{1, (Cmin^{j-1} +
/// Cmin^j Cmax)/2}, L = -ln(delta). Consecutive intervals overlap. The last
/// interval is truncated at k_max (its overlap is kept).
DepthPlan build_plan(double delta, double c_min, double c_max, double k_max);

std::string plan_to_json(const DepthPlan& plan);

/// Smooth partition-of-unity weights over the intervals covering k: exactly 1
/// in exclusive regions, C-infinity ramps across overlaps, sum exactly 1.
struct Weight {
  int interval = 0;
  double value = 0.0;
};
std::vector<Weight> pu_weights(const DepthPlan& plan, double k);

/// Weighted combination of per-interval dense outputs at k_query.
double pu_blend(const std::vector<pathfollow::PathSolution>& solutions,
                const DepthPlan& plan, double k_query);

/// Blended dispersion relation over [k_min, k_max]: one path-following run
/// per plan subinterval (each mapped to its own depth), joined by the
/// partition of unity.
class AdaptiveDispersion {
public:
  double eval(double k) const;

  /// Eigenfunction of the dominant covering interval remapped onto the given
  /// z points in [-1, 0]; zero below the interval's cut depth.
  Eigen::VectorXd eigenfunction(double k, const Eigen::VectorXd& z_points) const;

  double k_min() const { return k_lo_; }
  double k_max() const { return k_hi_; }
  const DepthPlan& plan() const { return plan_; }
  const std::vector<pathfollow::PathSolution>& paths() const { return paths_; }
  const std::vector<spectral::CollocationOperator>& operators() const { return ops_; }

  friend AdaptiveDispersion pf_radial_adaptive(const shear::ReducedProfile&,
                                               double, double,
                                               const pathfollow::PathOptions&,
                                               double, double, double, int);

private:
  DepthPlan plan_;
  std::vector<pathfollow::PathSolution> paths_;
  std::vector<spectral::CollocationOperator> ops_;
  std::vector<int> plan_index_;  // paths_[i] integrates plan interval plan_index_[i]
  double k_lo_ = 0.0, k_hi_ = 0.0;
};

/// delta defaults to 2^-52; C_min = 0.3 and C_max = 0.8.
AdaptiveDispersion pf_radial_adaptive(const shear::ReducedProfile& profile,
                                      double k_min, double k_max,
                                      const pathfollow::PathOptions& opts = {},
                                      double delta = std::ldexp(1.0, -52),
                                      double c_min = 0.3, double c_max = 0.8,
                                      int order = 64);

}  // namespace wavedisp::depth
