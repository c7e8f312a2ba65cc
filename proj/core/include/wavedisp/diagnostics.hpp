#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wavedisp/collocation.hpp"
#include "wavedisp/shear.hpp"
#include "wavedisp/spectral.hpp"

namespace wavedisp::diag {

/// Relative normwise error ||cand - ref||_inf / ||ref||_inf.
double normwise_error(const Eigen::VectorXd& candidate,
                      const Eigen::VectorXd& reference);

/// eta_L = ||b - M v||_2 / (||M||_2 ||v||_2 + ||b||_2); 0 when the
/// denominator vanishes.
double backward_error_linear(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                             const Eigen::VectorXd& b);

/// eta_Q = ||(A2 c^2 + A1 c + A0) w||_2 /
///         ((||A2||_2 |c|^2 + ||A1||_2 |c| + ||A0||_2) ||w||_2).
double backward_error_quadratic(const Eigen::MatrixXd& a2,
                                const Eigen::MatrixXd& a1,
                                const Eigen::MatrixXd& a0, double c,
                                const Eigen::VectorXd& w);

/// Spectral-norm condition number ||M^-1||_2 ||M||_2 via singular values;
/// +inf when M is singular.
double condition_linear(const Eigen::MatrixXd& m);

/// kappa_Q = (||A2||_2 |c|^2 + ||A1||_2 |c| + ||A0||_2) ||w_l|| ||w|| /
///           (|c| |w_l^* (2 A2 c + A1) w|). Throws on a vanishing
/// denominator (degenerate eigenvalue).
double condition_quadratic(const Eigen::MatrixXd& a2, const Eigen::MatrixXd& a1,
                           const Eigen::MatrixXd& a0, double c,
                           const Eigen::VectorXd& w, const Eigen::VectorXd& w_l);

/// Per-k backward errors and condition numbers for the quadratic eigensolve
/// and the continuation linear solve, with inf-norm aggregates over the
/// sweep.
struct StabilityReport {
  std::vector<double> k;
  std::vector<double> eta_l, eta_q, kappa_l, kappa_q;
  double eta_l_max = 0.0, eta_q_max = 0.0;
  double kappa_l_max = 0.0, kappa_q_max = 0.0;
  double eta_l_median = 0.0, eta_q_median = 0.0;
  double kappa_l_median = 0.0, kappa_q_median = 0.0;
  double product_l_max = 0.0, product_q_max = 0.0;  // kappa * eta
};

StabilityReport stability_sweep(const shear::ReducedProfile& profile,
                                const spectral::CollocationOperator& op,
                                const std::vector<double>& k_points,
                                const collocation::SolveOptions& opts = {});

struct BenchmarkRow {
  std::string method;  // "CL-c" or "PF"
  int n_q = 0;
  int n_z = 0;
  double target_eps = 0.0;
  std::string phase;  // "total", "build", or "query"
  double median_seconds = 0.0;
  int reps = 0;
  double variance_seconds = 0.0;
};

struct BenchmarkTarget {
  double eps = 1e-7;
  int n_z = 32;
  double tol = 1e-9;
};

struct BenchmarkConfig {
  std::vector<std::string> methods = {"CL-c", "PF"};
  std::vector<int> n_q = {100, 1000, 10000};
  std::vector<BenchmarkTarget> targets = {{1e-7, 32, 1e-9}};
  double k_min = 0.25;
  double k_max = 2.5;
  int reps = 5;
};

/// Times N_q dispersion queries per method and accuracy target. CL-c rows
/// carry one "total" phase; PF rows split into "build" (one continuation
/// run) and "query" (N_q dense evaluations). Medians over `reps`
/// repetitions.
std::vector<BenchmarkRow> run_benchmark(const shear::ReducedProfile& profile,
                                        const BenchmarkConfig& config);

/// CSV: method,N_q,N_z,target_eps,phase,median_seconds,reps,variance_seconds.
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);

}  // namespace wavedisp::diag
