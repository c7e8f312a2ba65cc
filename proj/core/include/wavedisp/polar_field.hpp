#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wavedisp/path_following.hpp"
#include "wavedisp/shear.hpp"
#include "wavedisp/spectral.hpp"

namespace wavedisp::grid {

/// One re-anchored radial slice: state [w; c] and its k-derivative at the
/// shared radius knots. No midpoints are kept, so radial dense output between
/// knots is cubic Hermite.
struct RadialSlice {
  double theta = 0.0;
  std::vector<Eigen::VectorXd> v;     // at each k knot, |w| part unit norm
  std::vector<Eigen::VectorXd> vdot;  // d/dk, from a fresh block solve
};

struct FieldQuery {
  double c = 0.0;
  Eigen::VectorXd w;  // empty unless requested
};

/// Precomputed polar grid of dispersion solutions over (k, theta) answering
/// scattered queries: cubic Hermite radially on the two bracketing slices,
/// then cubic Hermite in theta with end derivatives from the angular block
/// system solved at query time.
class PolarField {
public:
  double query_c(double k_q, double theta_q) const;
  FieldQuery query(double k_q, double theta_q, bool want_w = false) const;

  const std::vector<double>& k_knots() const { return k_; }
  const std::vector<double>& theta_knots() const { return theta_; }
  const std::vector<RadialSlice>& slices() const { return slices_; }
  const spectral::CollocationOperator& op() const { return op_; }
  bool periodic() const { return periodic_; }
  double tol() const { return tol_; }

  std::string to_json() const;

  friend PolarField build_field(const shear::ShearProfile&,
                                const spectral::CollocationOperator&,
                                const std::vector<double>&,
                                const std::vector<double>&, double,
                                const pathfollow::PathOptions&, int);
  friend PolarField load_field(const std::string&, const shear::ShearProfile&);

private:
  shear::ShearProfile profile_;
  spectral::CollocationOperator op_;
  shear::SampledShear2D samples_;  // profile on the nodes, fixed at build
  std::vector<double> k_, theta_;
  std::vector<RadialSlice> slices_;
  double k0_ = 0.0;
  double tol_ = 1e-9;
  bool periodic_ = false;
};

/// Runs the angular path at the nominal radius k0, seeds one radial path per
/// angle knot, and re-anchors every slice at the fixed radius knots. Slices
/// are independent; jobs > 1 builds them on that many threads.
PolarField build_field(const shear::ShearProfile& profile2d,
                       const spectral::CollocationOperator& op,
                       const std::vector<double>& k_knots,
                       const std::vector<double>& theta_knots, double k0,
                       const pathfollow::PathOptions& opts = {}, int jobs = 1);

/// Rebuilds a field from its JSON container; provenance (profile name,
/// Froude number, order, depth) must match the supplied profile. Queries on
/// the loaded field reproduce the original bit-exactly.
PolarField load_field(const std::string& json_text,
                      const shear::ShearProfile& profile2d);

}  // namespace wavedisp::grid
