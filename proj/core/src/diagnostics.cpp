#include "wavedisp/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wavedisp/errors.hpp"
#include "wavedisp/linalg.hpp"
#include "wavedisp/path_following.hpp"

namespace wavedisp::diag {

namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0];
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size() - 1);
}

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] =
        std::exp(la + (lb - la) * i / std::max(1, n - 1));
  return out;
}

}  // namespace

double normwise_error(const Eigen::VectorXd& candidate,
                      const Eigen::VectorXd& reference) {
  if (candidate.size() != reference.size())
    throw std::invalid_argument("normwise_error: length mismatch");
  const double denom = reference.cwiseAbs().maxCoeff();
  if (denom == 0.0)
    throw std::invalid_argument("normwise_error: reference is all zero");
  return (candidate - reference).cwiseAbs().maxCoeff() / denom;
}

double backward_error_linear(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                             const Eigen::VectorXd& b) {
  const double denom = spectral_norm(m) * v.norm() + b.norm();
  if (denom == 0.0) return 0.0;
  return (b - m * v).norm() / denom;
}

double backward_error_quadratic(const Eigen::MatrixXd& a2,
                                const Eigen::MatrixXd& a1,
                                const Eigen::MatrixXd& a0, double c,
                                const Eigen::VectorXd& w) {
  if (w.norm() == 0.0)
    throw std::invalid_argument("backward_error_quadratic: w = 0");
  const double scale = spectral_norm(a2) * c * c +
                       spectral_norm(a1) * std::abs(c) + spectral_norm(a0);
  return ((a2 * (c * c) + a1 * c + a0) * w).norm() / (scale * w.norm());
}

double condition_linear(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  const double lo = sv[sv.size() - 1];
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / lo;
}

double condition_quadratic(const Eigen::MatrixXd& a2, const Eigen::MatrixXd& a1,
                           const Eigen::MatrixXd& a0, double c,
                           const Eigen::VectorXd& w,
                           const Eigen::VectorXd& w_l) {
  if (w.norm() == 0.0 || w_l.norm() == 0.0)
    throw std::invalid_argument("condition_quadratic: zero eigenvector");
  const double scale = spectral_norm(a2) * c * c +
                       spectral_norm(a1) * std::abs(c) + spectral_norm(a0);
  const double denom = std::abs(c) * std::abs(w_l.dot((2.0 * c * a2 + a1) * w));
  if (denom == 0.0)
    throw NumericalError("condition_quadratic: degenerate eigenvalue");
  return scale * w_l.norm() * w.norm() / denom;
}

StabilityReport stability_sweep(const shear::ReducedProfile& profile,
                                const spectral::CollocationOperator& op,
                                const std::vector<double>& k_points,
                                const collocation::SolveOptions& opts) {
  if (k_points.empty())
    throw std::invalid_argument("stability_sweep: empty k list");

  StabilityReport rep;
  rep.k = k_points;

  for (double k : k_points) {
    const collocation::QuadraticPencil p =
        collocation::assemble_forward(profile, op, k);
    const Eigen::Index n = p.a0.rows();

    // Companion solve with left vectors; the quadratic left eigenvector is
    // the first block of the companion left eigenvector.
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    l.topLeftCorner(n, n) = -p.a1;
    l.topRightCorner(n, n) = -p.a0;
    l.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    m.topLeftCorner(n, n) = p.a2;
    m.bottomRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    const linalg::GeneralizedEigenResult eig =
        linalg::generalized_eig(l, m, true);

    int best = -1;
    double c_best = -std::numeric_limits<double>::max();
    for (Eigen::Index j = 0; j < eig.alpha.size(); ++j) {
      if (eig.beta[j] == 0.0) continue;
      const std::complex<double> c = eig.alpha[j] / eig.beta[j];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) continue;
      if (std::abs(c) >= opts.magnitude_cutoff) continue;
      if (std::abs(c.imag()) > opts.imag_tol * std::abs(c)) continue;
      if (c.real() > c_best) {
        c_best = c.real();
        best = static_cast<int>(j);
      }
    }
    if (best < 0)
      throw NoPropagatingModeError("stability_sweep: no branch at k=" +
                                   std::to_string(k));

    const Eigen::VectorXd w =
        collocation::normalize_eigenvector(eig.right_vectors.col(best).tail(n))
            .real();
    const Eigen::VectorXd w_l =
        collocation::normalize_eigenvector(eig.left_vectors.col(best).head(n))
            .real();

    const double eta_q = backward_error_quadratic(p.a2, p.a1, p.a0, c_best, w);
    const double kappa_q =
        condition_quadratic(p.a2, p.a1, p.a0, c_best, w, w_l);

    const pathfollow::BlockSystem bs =
        pathfollow::assemble_radial(profile, op, k, c_best, w);
    const pathfollow::Tangent tan = pathfollow::derivative(bs, k);
    Eigen::VectorXd v(tan.wdot.size() + 1);
    v << tan.wdot, tan.cdot;
    const double eta_l = backward_error_linear(bs.m, v, bs.b);
    const double kappa_l = condition_linear(bs.m);

    rep.eta_l.push_back(eta_l);
    rep.eta_q.push_back(eta_q);
    rep.kappa_l.push_back(kappa_l);
    rep.kappa_q.push_back(kappa_q);
    rep.eta_l_max = std::max(rep.eta_l_max, eta_l);
    rep.eta_q_max = std::max(rep.eta_q_max, eta_q);
    rep.kappa_l_max = std::max(rep.kappa_l_max, kappa_l);
    rep.kappa_q_max = std::max(rep.kappa_q_max, kappa_q);
    rep.product_l_max = std::max(rep.product_l_max, kappa_l * eta_l);
    rep.product_q_max = std::max(rep.product_q_max, kappa_q * eta_q);
  }

  rep.eta_l_median = median(rep.eta_l);
  rep.eta_q_median = median(rep.eta_q);
  rep.kappa_l_median = median(rep.kappa_l);
  rep.kappa_q_median = median(rep.kappa_q);
  return rep;
}

std::vector<BenchmarkRow> run_benchmark(const shear::ReducedProfile& profile,
                                        const BenchmarkConfig& config) {
  std::vector<BenchmarkRow> rows;
  const int reps = std::max(5, config.reps);

  for (const BenchmarkTarget& target : config.targets) {
    const spectral::CollocationOperator op =
        spectral::map_operator(spectral::make_operator(target.n_z), 1.0);

    pathfollow::PathOptions popts;
    popts.tol = target.tol;

    // PF build is query-count independent: one row per target, n_q = 0.
    pathfollow::PathSolution path;
    {
      std::vector<double> times;
      for (int r = 0; r < reps; ++r)
        times.push_back(time_once([&] {
          path = pathfollow::pf_radial(profile, op, config.k_min, config.k_max,
                                       std::sqrt(config.k_min * config.k_max),
                                       popts);
        }));
      rows.push_back({"PF", 0, target.n_z, target.eps, "build", median(times),
                      reps, variance(times)});
    }

    for (int n_q : config.n_q) {
      const std::vector<double> ks =
          log_spaced(config.k_min, config.k_max, n_q);

      for (const std::string& method : config.methods) {
        std::vector<double> times;
        if (method == "CL-c") {
          volatile double sink = 0.0;
          for (int r = 0; r < reps; ++r)
            times.push_back(time_once([&] {
              for (double k : ks)
                sink = collocation::solve_forward(profile, op, k).c;
            }));
          rows.push_back({method, n_q, target.n_z, target.eps, "total",
                          median(times), reps, variance(times)});
        } else if (method == "PF") {
          volatile double sink = 0.0;
          for (int r = 0; r < reps; ++r)
            times.push_back(time_once([&] {
              for (double k : ks) sink = pathfollow::dense_eval_c(path, k);
            }));
          rows.push_back({method, n_q, target.n_z, target.eps, "query",
                          median(times), reps, variance(times)});
        } else {
          throw std::invalid_argument("run_benchmark: unknown method " + method);
        }
      }
    }
  }
  return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "method,N_q,N_z,target_eps,phase,median_seconds,reps,variance_seconds\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.n_q << ',' << r.n_z << ',' << r.target_eps
        << ',' << r.phase << ',' << r.median_seconds << ',' << r.reps << ','
        << r.variance_seconds << '\n';
  return out.str();
}

}  // namespace wavedisp::diag
