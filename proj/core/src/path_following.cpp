#include "wavedisp/path_following.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "wavedisp/errors.hpp"

namespace wavedisp::pathfollow {

namespace {

// Dormand--Prince RK5(4)7M tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kErr[7] = {71.0 / 57600,      0.0,          -71.0 / 16695,
                            71.0 / 1920,       -17253.0 / 339200,
                            22.0 / 525,        -1.0 / 40};

// Shampine interpolation polynomial coefficients (powers theta..theta^4 per
// stage); evaluated at theta = 1/2 for the stored midpoint.
constexpr double kBI[7][4] = {
    {1.0, -183.0 / 64, 37.0 / 12, -145.0 / 128},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 1500.0 / 371, -1000.0 / 159, 1000.0 / 371},
    {0.0, -125.0 / 32, 125.0 / 12, -375.0 / 64},
    {0.0, 9477.0 / 3392, -729.0 / 106, 25515.0 / 6784},
    {0.0, -11.0 / 7, 11.0 / 3, -55.0 / 28},
    {0.0, 3.0 / 2, -4.0, 5.0 / 2},
};

double mid_weight(int stage) {
  const double th = 0.5;
  double p = 0.0, tp = th;
  for (int j = 0; j < 4; ++j) {
    p += kBI[stage][j] * tp;
    tp *= th;
  }
  return p;
}

Eigen::RowVectorXd surface_row_base(const Eigen::RowVectorXd& df, double u0,
                                    double du0, double finv2, double c) {
  Eigen::RowVectorXd f = (u0 - c) * (u0 - c) * df;
  f[0] -= du0 * (u0 - c) + finv2;
  return f;
}

// Quartic Hermite through {y0, d0, y_mid, y1, d1} on [t0, t1], scaled to s in
// [0, 1].
template <typename Vec>
Vec quartic_hermite(const Vec& y0, const Vec& d0, const Vec& ym, const Vec& y1,
                    const Vec& d1, double h, double s) {
  const Vec m0 = h * d0;
  const Vec m1 = h * d1;
  const Vec bp = y1 - y0 - m0;
  const Vec rhs_a = 16.0 * (ym - y0) - 8.0 * m0;
  const Vec a4 = rhs_a - 8.0 * bp + 2.0 * (m1 - m0);
  const Vec a3 = (m1 - m0 - 2.0 * bp) - 2.0 * a4;
  const Vec a2 = bp - a3 - a4;
  return y0 + s * (m0 + s * (a2 + s * (a3 + s * a4)));
}

}  // namespace

BlockSystem assemble_radial(const shear::SampledShear& s, double froude_sq,
                            const spectral::CollocationOperator& op, double k,
                            double c, const Eigen::VectorXd& w) {
  const int n = op.order;
  if (w.size() != n) throw std::invalid_argument("assemble_radial: bad w length");
  const auto d2 = op.d2.topLeftCorner(n, n);
  const Eigen::RowVectorXd df = op.d1.row(0).head(n);
  const double finv2 = 1.0 / froude_sq;
  const Eigen::ArrayXd uc = s.u.head(n).array() - c;

  BlockSystem sys;
  sys.m.resize(n + 1, n + 1);
  auto p = sys.m.topLeftCorner(n, n);
  p.noalias() = uc.matrix().asDiagonal() * d2;
  p.diagonal().tail(n - 1) -=
      s.ddu.segment(1, n - 1) + k * k * uc.tail(n - 1).matrix();
  p.row(0) = surface_row_base(df, s.u[0], s.du[0], finv2, c);

  // Q w without forming Q: interior rows are -(D2 w) + k^2 w.
  Eigen::VectorXd qw = k * k * w;
  qw.noalias() -= d2 * w;
  qw[0] = -2.0 * uc[0] * df.dot(w) + s.du[0] * w[0];
  sys.m.topRightCorner(n, 1) = qw;
  sys.m.bottomLeftCorner(1, n) = -w.transpose();
  sys.m(n, n) = 0.0;

  sys.b.resize(n + 1);
  sys.b.head(n) = (2.0 * k) * (uc * w.array()).matrix();
  sys.b[0] = 0.0;
  sys.b[n] = 0.0;
  return sys;
}

BlockSystem assemble_radial(const shear::ReducedProfile& profile,
                            const spectral::CollocationOperator& op, double k,
                            double c, const Eigen::VectorXd& w) {
  return assemble_radial(sample(profile, op), profile.froude_sq, op, k, c, w);
}

BlockSystem assemble_angular(const shear::SampledShear& s,
                             const shear::SampledShear& sd, double froude_sq,
                             const spectral::CollocationOperator& op, double k0,
                             double c, const Eigen::VectorXd& w) {
  const int n = op.order;
  BlockSystem sys = assemble_radial(s, froude_sq, op, k0, c, w);

  // Only the right-hand side block R changes for the angular parametrisation.
  const auto d2 = op.d2.topLeftCorner(n, n);
  const Eigen::RowVectorXd df = op.d1.row(0).head(n);
  Eigen::VectorXd d2w = d2 * w;
  sys.b.head(n) =
      (-sd.u.head(n).array() * d2w.array() +
       (sd.ddu.head(n).array() + k0 * k0 * sd.u.head(n).array()) * w.array())
          .matrix();
  sys.b[0] = -2.0 * (s.u[0] - c) * sd.u[0] * df.dot(w) +
             (sd.u[0] * s.du[0] + sd.du[0] * (s.u[0] - c)) * w[0];
  return sys;
}

BlockSystem assemble_angular(const shear::ShearProfile& profile2d,
                             const spectral::CollocationOperator& op, double theta,
                             double k0, double c, const Eigen::VectorXd& w) {
  const shear::SampledShear2D s2 = sample(profile2d, op);
  return assemble_angular(project(s2, theta), angular_derivative(s2, theta),
                          profile2d.froude_sq, op, k0, c, w);
}

Tangent derivative(const BlockSystem& system, double t) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.m);
  // With partial pivoting a (numerically) singular M shows up as a tiny
  // trailing pivot; the diagonal ratio is a cheap substitute for rcond.
  const Eigen::VectorXd piv = lu.matrixLU().diagonal().cwiseAbs();
  if (!(piv.minCoeff() > std::numeric_limits<double>::epsilon() * piv.maxCoeff()))
    throw ContinuationBreakdownError("continuation matrix numerically singular", t);
  const Eigen::VectorXd x = lu.solve(system.b);
  Tangent out;
  out.wdot = x.head(x.size() - 1);
  out.cdot = x[x.size() - 1];
  return out;
}

DopriStepResult dopri_step(const OdeFunction& f, double t, const Eigen::VectorXd& y,
                           double h) {
  if (h == 0.0) throw std::invalid_argument("dopri_step: zero stepsize");
  const Eigen::Index n = y.size();
  Eigen::MatrixXd k(n, 7);
  k.col(0) = f(t, y);
  for (int s = 1; s < 7; ++s) {
    Eigen::VectorXd ys = y;
    for (int j = 0; j < s; ++j)
      if (kA[s][j] != 0.0) ys += (h * kA[s][j]) * k.col(j);
    k.col(s) = f(t + kC[s] * h, ys);
  }

  DopriStepResult out;
  out.y_next = y;
  for (int s = 0; s < 7; ++s)
    if (kB5[s] != 0.0) out.y_next += (h * kB5[s]) * k.col(s);
  out.f_next = k.col(6);  // FSAL: stage 7 evaluated at (t+h, y_next)

  out.error = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < 7; ++s)
    if (kErr[s] != 0.0) out.error += (h * kErr[s]) * k.col(s);

  out.y_mid = y;
  for (int s = 0; s < 7; ++s) {
    const double wgt = mid_weight(s);
    if (wgt != 0.0) out.y_mid += (h * wgt) * k.col(s);
  }
  return out;
}

PathSolution adaptive_integrate(const OdeFunction& f, double t0, double t1,
                                const Eigen::VectorXd& v0, double tol,
                                const IntegrateOptions& opts) {
  if (tol < 1e-15 || tol > 1e-2)
    throw std::invalid_argument("adaptive_integrate: tol out of [1e-15, 1e-2]");

  PathSolution sol;
  sol.tol = tol;
  sol.t.push_back(t0);
  sol.v.push_back(v0);
  sol.vdot.push_back(f(t0, v0));
  if (t0 == t1) return sol;

  const double span = std::abs(t1 - t0);
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double h = dir * opts.initial_step_fraction * span;
  double t = t0;
  Eigen::VectorXd y = v0;
  int steps = 0;

  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps)
      throw BudgetExceededError("adaptive_integrate: step budget exceeded");
    if (std::abs(h) < 1e-14 * span)
      throw ContinuationBreakdownError("adaptive_integrate: step underflow", t);
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    DopriStepResult step = dopri_step(f, t, y, h);
    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc =
          tol + tol * std::max(std::abs(y[i]), std::abs(step.y_next[i]));
      err += std::pow(step.error[i] / sc, 2);
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      const double t_next = t + h;
      Eigen::VectorXd y_next = step.y_next;
      if (opts.renorm_size > 0)
        y_next.head(opts.renorm_size).normalize();
      sol.t_mid.push_back(t + 0.5 * h);
      sol.v_mid.push_back(step.y_mid);
      sol.t.push_back(t_next);
      sol.v.push_back(y_next);
      sol.vdot.push_back(f(t_next, y_next));
      t = t_next;
      y = y_next;
    }
    h *= factor;
  }

  // Left-going integrations are produced in decreasing t; store increasing.
  if (dir < 0.0) {
    std::reverse(sol.t.begin(), sol.t.end());
    std::reverse(sol.v.begin(), sol.v.end());
    std::reverse(sol.vdot.begin(), sol.vdot.end());
    std::reverse(sol.t_mid.begin(), sol.t_mid.end());
    std::reverse(sol.v_mid.begin(), sol.v_mid.end());
  }
  return sol;
}

namespace {

int locate_interval(const std::vector<double>& t, double& tq) {
  // Absorb rounding overshoot from log-spaced query generation.
  const double slack =
      1e-12 * std::max({1.0, std::abs(t.front()), std::abs(t.back())});
  if (tq < t.front() && tq >= t.front() - slack) tq = t.front();
  if (tq > t.back() && tq <= t.back() + slack) tq = t.back();
  if (tq < t.front() || tq > t.back())
    throw std::out_of_range("dense_eval: query outside parameter span");
  const auto it = std::upper_bound(t.begin(), t.end(), tq);
  int i = static_cast<int>(it - t.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(t.size()) - 2);
}

}  // namespace

double dense_eval_c(const PathSolution& sol, double t_query) {
  double tq = sol.log_param ? std::log(t_query) : t_query;
  if (sol.t.size() == 1) {
    if (tq != sol.t.front())
      throw std::out_of_range("dense_eval: query outside parameter span");
    return sol.v.front()[sol.v.front().size() - 1];
  }
  const int i = locate_interval(sol.t, tq);
  const Eigen::Index last = sol.v[0].size() - 1;
  const double h = sol.t[i + 1] - sol.t[i];
  if (tq == sol.t[i]) return sol.v[i][last];
  if (tq == sol.t[i + 1]) return sol.v[i + 1][last];
  if (tq == sol.t_mid[i]) return sol.v_mid[i][last];
  const double s = (tq - sol.t[i]) / h;
  return quartic_hermite<double>(sol.v[i][last], sol.vdot[i][last],
                                 sol.v_mid[i][last], sol.v[i + 1][last],
                                 sol.vdot[i + 1][last], h, s);
}

DenseValue dense_eval(const PathSolution& sol, double t_query, bool want_w) {
  DenseValue out;
  if (!want_w) {
    out.c = dense_eval_c(sol, t_query);
    return out;
  }
  double tq = sol.log_param ? std::log(t_query) : t_query;
  Eigen::VectorXd v;
  if (sol.t.size() == 1) {
    if (tq != sol.t.front())
      throw std::out_of_range("dense_eval: query outside parameter span");
    v = sol.v.front();
  } else {
    const int i = locate_interval(sol.t, tq);
    if (tq == sol.t[i]) {
      v = sol.v[i];
    } else if (tq == sol.t[i + 1]) {
      v = sol.v[i + 1];
    } else if (tq == sol.t_mid[i]) {
      v = sol.v_mid[i];
    } else {
      const double h = sol.t[i + 1] - sol.t[i];
      const double s = (tq - sol.t[i]) / h;
      v = quartic_hermite<Eigen::VectorXd>(sol.v[i], sol.vdot[i], sol.v_mid[i],
                                           sol.v[i + 1], sol.vdot[i + 1], h, s);
    }
  }
  out.c = v[v.size() - 1];
  out.w = v.head(v.size() - 1);
  return out;
}

namespace {

// Concatenate the left-going and right-going halves; the seed point is shared.
PathSolution merge_paths(PathSolution left, const PathSolution& right) {
  PathSolution& m = left;
  for (size_t i = 1; i < right.t.size(); ++i) {
    m.t.push_back(right.t[i]);
    m.v.push_back(right.v[i]);
    m.vdot.push_back(right.vdot[i]);
  }
  for (size_t i = 0; i < right.t_mid.size(); ++i) {
    m.t_mid.push_back(right.t_mid[i]);
    m.v_mid.push_back(right.v_mid[i]);
  }
  return m;
}

Eigen::VectorXd seed_state(const collocation::EigenSolution& s) {
  const Eigen::VectorXd w = s.real_eigenvector();
  Eigen::VectorXd v(w.size() + 1);
  v.head(w.size()) = w / w.norm();
  v[w.size()] = s.c;
  return v;
}

// The quartic Hermite interpolant is one order below the propagated solution,
// so its mid-interval error is a fixed multiple (~100x) of the per-step
// tolerance. Integrating tighter keeps dense output within the requested tol.
double interior_tol(double tol) { return std::max(tol / 100.0, 1e-15); }

}  // namespace

PathSolution pf_radial(const shear::ReducedProfile& profile,
                       const spectral::CollocationOperator& op, double k_min,
                       double k_max, double k_seed, const PathOptions& opts,
                       const std::optional<collocation::EigenSolution>& seed) {
  if (k_seed < k_min || k_seed > k_max)
    throw std::invalid_argument("pf_radial: k_seed outside [k_min, k_max]");

  const collocation::EigenSolution init =
      seed ? *seed : collocation::solve_forward(profile, op, k_seed, opts.solve);
  const Eigen::VectorXd v0 = seed_state(init);
  const int n = op.order;

  OdeFunction f;
  if (opts.log_k) {
    f = [&profile, &op, n](double s, const Eigen::VectorXd& y) {
      const double k = std::exp(s);
      const Tangent tg =
          derivative(assemble_radial(profile, op, k, y[n], y.head(n)), k);
      Eigen::VectorXd dy(n + 1);
      dy.head(n) = k * tg.wdot;  // chain rule dv/d(ln k) = k dv/dk
      dy[n] = k * tg.cdot;
      return dy;
    };
  } else {
    f = [&profile, &op, n](double k, const Eigen::VectorXd& y) {
      const Tangent tg =
          derivative(assemble_radial(profile, op, k, y[n], y.head(n)), k);
      Eigen::VectorXd dy(n + 1);
      dy.head(n) = tg.wdot;
      dy[n] = tg.cdot;
      return dy;
    };
  }

  IntegrateOptions iopts = opts.integrate;
  iopts.renorm_size = n;
  auto param = [&](double k) { return opts.log_k ? std::log(k) : k; };

  const double itol = interior_tol(opts.tol);
  PathSolution left =
      adaptive_integrate(f, param(k_seed), param(k_min), v0, itol, iopts);
  PathSolution right =
      adaptive_integrate(f, param(k_seed), param(k_max), v0, itol, iopts);
  PathSolution merged = merge_paths(std::move(left), right);
  merged.tol = opts.tol;
  merged.log_param = opts.log_k;
  return merged;
}

PathSolution pf_angular(const shear::ShearProfile& profile2d,
                        const spectral::CollocationOperator& op, double k0,
                        double theta_min, double theta_max, double theta_seed,
                        const PathOptions& opts,
                        const std::optional<collocation::EigenSolution>& seed) {
  if (theta_seed < theta_min || theta_seed > theta_max)
    throw std::invalid_argument("pf_angular: theta_seed outside span");

  const collocation::EigenSolution init =
      seed ? *seed
           : collocation::solve_forward(project(profile2d, theta_seed), op, k0,
                                        opts.solve);
  const Eigen::VectorXd v0 = seed_state(init);
  const int n = op.order;

  OdeFunction f = [&profile2d, &op, n, k0](double theta, const Eigen::VectorXd& y) {
    const Tangent tg = derivative(
        assemble_angular(profile2d, op, theta, k0, y[n], y.head(n)), theta);
    Eigen::VectorXd dy(n + 1);
    dy.head(n) = tg.wdot;
    dy[n] = tg.cdot;
    return dy;
  };

  IntegrateOptions iopts = opts.integrate;
  iopts.renorm_size = n;
  const double itol = interior_tol(opts.tol);
  PathSolution left =
      adaptive_integrate(f, theta_seed, theta_min, v0, itol, iopts);
  PathSolution right =
      adaptive_integrate(f, theta_seed, theta_max, v0, itol, iopts);
  PathSolution merged = merge_paths(std::move(left), right);
  merged.tol = opts.tol;
  return merged;
}

namespace {

std::string decimal(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21e", x);
  return buf;
}

}  // namespace

SeedRecord make_seed_record(const collocation::EigenSolution& sol,
                            const spectral::CollocationOperator& op,
                            const shear::ReducedProfile& profile) {
  SeedRecord rec;
  rec.k = decimal(sol.k);
  rec.c = decimal(sol.c);
  const Eigen::VectorXd w = sol.real_eigenvector();
  for (Eigen::Index i = 0; i < w.size(); ++i) rec.w.push_back(decimal(w[i]));
  rec.order = op.order;
  rec.h = op.depth;
  rec.profile_name = profile.name;
  rec.froude_sq = profile.froude_sq;
  return rec;
}

std::string seed_to_json(const SeedRecord& rec) {
  nlohmann::json j;
  j["k"] = rec.k;
  j["c"] = rec.c;
  j["w"] = rec.w;
  j["N_z"] = rec.order;
  j["h"] = rec.h;
  j["profile_name"] = rec.profile_name;
  j["F2"] = rec.froude_sq;
  return j.dump(2);
}

SeedRecord seed_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  SeedRecord rec;
  rec.k = j.at("k").get<std::string>();
  rec.c = j.at("c").get<std::string>();
  rec.w = j.at("w").get<std::vector<std::string>>();
  rec.order = j.at("N_z").get<int>();
  rec.h = j.at("h").get<double>();
  rec.profile_name = j.value("profile_name", std::string());
  rec.froude_sq = j.at("F2").get<double>();
  return rec;
}

collocation::EigenSolution import_seed(const SeedRecord& rec,
                                       const shear::ReducedProfile& profile,
                                       const spectral::CollocationOperator& op) {
  if (rec.order != op.order)
    throw InvalidSeedError("seed N_z does not match target operator");
  if (std::abs(rec.h - op.depth) > 1e-12)
    throw InvalidSeedError("seed depth does not match target operator");
  if (!rec.profile_name.empty() && rec.profile_name != profile.name)
    throw InvalidSeedError("seed profile name does not match");
  if (std::abs(rec.froude_sq - profile.froude_sq) >
      1e-12 * std::abs(profile.froude_sq))
    throw InvalidSeedError("seed Froude number does not match");
  if (static_cast<int>(rec.w.size()) != op.order)
    throw InvalidSeedError("seed eigenvector length does not match");

  collocation::EigenSolution sol;
  sol.k = std::stod(rec.k);
  sol.c = std::stod(rec.c);
  Eigen::VectorXd w(op.order);
  for (int i = 0; i < op.order; ++i) w[i] = std::stod(rec.w[i]);
  sol.w = w.cast<std::complex<double>>();
  sol.normalized = false;

  // Backward-error check of the imported triplet against the target pencil.
  const collocation::QuadraticPencil p =
      collocation::assemble_forward(profile, op, sol.k);
  const double c = sol.c;
  const double num = ((c * c * p.a2 + c * p.a1 + p.a0) * w).norm();
  const auto nrm = [](const Eigen::MatrixXd& m) {
    return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues()(0);
  };
  const double den =
      (nrm(p.a2) * c * c + nrm(p.a1) * std::abs(c) + nrm(p.a0)) * w.norm();
  if (num / den > 1e-12)
    throw StaleSeedError("seed residual too large: " + std::to_string(num / den));

  sol.w = collocation::normalize_eigenvector(sol.w);
  sol.normalized = true;
  return sol;
}

}  // namespace wavedisp::pathfollow
