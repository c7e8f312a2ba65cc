#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavedisp/collocation.hpp"
#include "wavedisp/shear.hpp"
#include "wavedisp/spectral.hpp"

namespace wavedisp::pathfollow {

/// Continuation linear system M [wdot; cdot] = b. The last row is the
/// tangency constraint [-w^T, 0] with zero right-hand side.
struct BlockSystem {
  Eigen::MatrixXd m;
  Eigen::VectorXd b;
};

/// Radial system at fixed angle: parameter k, blocks P, Q, R from the
/// k-differentiated pencil.
BlockSystem assemble_radial(const shear::ReducedProfile& profile,
                            const spectral::CollocationOperator& op, double k,
                            double c, const Eigen::VectorXd& w);

/// Angular system at fixed k0: parameter theta; P and Q coincide with the
/// radial blocks on the projected profile, only R changes.
BlockSystem assemble_angular(const shear::ShearProfile& profile2d,
                             const spectral::CollocationOperator& op, double theta,
                             double k0, double c, const Eigen::VectorXd& w);

/// Same systems built from pre-sampled profiles, avoiding the per-call
/// function-object evaluation; used on hot query paths.
BlockSystem assemble_radial(const shear::SampledShear& s, double froude_sq,
                            const spectral::CollocationOperator& op, double k,
                            double c, const Eigen::VectorXd& w);
BlockSystem assemble_angular(const shear::SampledShear& s,
                             const shear::SampledShear& s_dot, double froude_sq,
                             const spectral::CollocationOperator& op, double k0,
                             double c, const Eigen::VectorXd& w);

struct Tangent {
  Eigen::VectorXd wdot;
  double cdot = 0.0;
};

/// LU solve of the block system; throws ContinuationBreakdownError when M is
/// numerically singular. `t` only labels the error.
Tangent derivative(const BlockSystem& system, double t = 0.0);

using OdeFunction = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// One Dormand--Prince RK5(4)7M step.
struct DopriStepResult {
  Eigen::VectorXd y_next;      // 5th-order solution
  Eigen::VectorXd error;      // embedded 4th-order error estimate
  Eigen::VectorXd y_mid;      // Shampine midpoint value
  Eigen::VectorXd f_next;     // FSAL stage f(t+h, y_next)
};
DopriStepResult dopri_step(const OdeFunction& f, double t, const Eigen::VectorXd& y,
                           double h_step);

/// Continuation path: control points with derivatives plus one stored
/// midpoint per interval, supporting piecewise quartic Hermite dense output.
/// The parameter is k (radial), theta (angular), or ln k when log_param.
struct PathSolution {
  std::vector<double> t;               // strictly increasing control points
  std::vector<Eigen::VectorXd> v;      // [w; c], |w| = 1 at control points
  std::vector<Eigen::VectorXd> vdot;
  std::vector<double> t_mid;           // one per interval
  std::vector<Eigen::VectorXd> v_mid;
  double tol = 1e-9;
  bool log_param = false;

  double t_min() const { return t.front(); }
  double t_max() const { return t.back(); }
  int state_size() const { return static_cast<int>(v.front().size()); }
};

struct IntegrateOptions {
  int max_steps = 100000;
  int renorm_size = 0;  // renormalise the leading block of this length; 0 = off
  double initial_step_fraction = 1e-2;
};

/// Adaptive RK5(4) integration over [t0, t1] (either direction) with error
/// per step control: safety 0.9, exponent 1/5, ratio clamps [0.2, 5].
PathSolution adaptive_integrate(const OdeFunction& f, double t0, double t1,
                                const Eigen::VectorXd& v0, double tol,
                                const IntegrateOptions& opts = {});

struct DenseValue {
  double c = 0.0;
  Eigen::VectorXd w;  // empty unless requested
};

/// Quartic Hermite dense output. Scalar-only queries interpolate the last
/// (c) component alone.
double dense_eval_c(const PathSolution& sol, double t_query);
DenseValue dense_eval(const PathSolution& sol, double t_query, bool want_w = false);

struct PathOptions {
  double tol = 1e-9;
  bool log_k = false;  // integrate in ln k (radial paths only)
  IntegrateOptions integrate;
  collocation::SolveOptions solve;
};

/// PF-R-r-c: continuation in k over [k_min, k_max] from a CL-c seed at
/// k_seed (or the supplied seed).
PathSolution pf_radial(const shear::ReducedProfile& profile,
                       const spectral::CollocationOperator& op, double k_min,
                       double k_max, double k_seed, const PathOptions& opts = {},
                       const std::optional<collocation::EigenSolution>& seed = {});

/// PF-R-a-c: continuation in theta at fixed k0.
PathSolution pf_angular(const shear::ShearProfile& profile2d,
                        const spectral::CollocationOperator& op, double k0,
                        double theta_min, double theta_max, double theta_seed,
                        const PathOptions& opts = {},
                        const std::optional<collocation::EigenSolution>& seed = {});

/// High-precision seed record: decimal strings round-tripping >= 20
/// significant digits, plus the metadata needed to validate the target
/// discretisation.
struct SeedRecord {
  std::string k, c;
  std::vector<std::string> w;
  int order = 0;
  double h = 1.0;
  std::string profile_name;
  double froude_sq = 0.0;
};

SeedRecord make_seed_record(const collocation::EigenSolution& sol,
                            const spectral::CollocationOperator& op,
                            const shear::ReducedProfile& profile);
std::string seed_to_json(const SeedRecord& rec);
SeedRecord seed_from_json(const std::string& json_text);

/// Parses and validates a seed record against the target profile/operator:
/// metadata mismatch -> InvalidSeedError, pencil residual > 1e-12 ->
/// StaleSeedError.
collocation::EigenSolution import_seed(const SeedRecord& rec,
                                       const shear::ReducedProfile& profile,
                                       const spectral::CollocationOperator& op);

}  // namespace wavedisp::pathfollow
