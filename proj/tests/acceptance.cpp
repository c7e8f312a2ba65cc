// Acceptance gate: one numbered end-to-end criterion per function, each
// printing a single PASS/FAIL line. Run with no arguments for all criteria or
// with a list of criterion numbers. Exit status is nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "wavedisp/adaptive_depth.hpp"
#include "wavedisp/collocation.hpp"
#include "wavedisp/diagnostics.hpp"
#include "wavedisp/polar_field.hpp"
#include "wavedisp/spectral.hpp"

using namespace wavedisp;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. Blended wide-band dispersion: quiescent closed form over [0.025, 250]
//    to 1e-9 relative accuracy in under 30 s.
Outcome criterion1() {
  const double t0 = now_seconds();
  const auto quiet = shear::as_reduced(shear::builtin_profile("quiescent"));
  pathfollow::PathOptions opts;
  opts.tol = 1e-11;
  opts.log_k = true;
  const auto disp = depth::pf_radial_adaptive(quiet, 0.025, 250.0, opts);
  double worst = 0.0;
  for (double k : testutil::log_spaced(0.025, 250.0, 200)) {
    const double exact = testutil::quiescent_c(k, 0.05);
    worst = std::max(worst, std::abs(disp.eval(k) - exact) / exact);
  }
  const double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel err %.2e (limit 1e-9), %.1f s (limit 30)",
                worst, dt);
  return {worst <= 1e-9 && dt < 30.0, buf};
}

// 2. Constant-vorticity closed form for three shear strengths to 1e-8.
Outcome criterion2() {
  const double t0 = now_seconds();
  const auto op = testutil::unit_op(64);
  double worst = 0.0;
  for (double sigma : {0.1, 0.2, 0.5}) {
    const auto lin = shear::as_reduced(shear::linear_profile(sigma, 0.0));
    for (double k : testutil::log_spaced(0.025, 25.0, 50)) {
      const double exact = testutil::linear_c(k, sigma, 0.05);
      const double c = collocation::solve_forward(lin, op, k).c;
      worst = std::max(worst, std::abs(c - exact) / exact);
    }
  }
  const double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel err %.2e (limit 1e-8), %.1f s (limit 10)",
                worst, dt);
  return {worst <= 1e-8 && dt < 10.0, buf};
}

// 3. Spectral convergence of the direct solver on the oscillatory profile:
//    geometric error decay against a fine-grid reference, 1e-8 by N_z = 64,
//    then a roundoff plateau.
Outcome criterion3() {
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const std::vector<double> ks = {0.25, 0.5, 1.0, 1.6, 2.5};
  const auto ref_op = testutil::unit_op(256);
  std::vector<double> c_ref;
  for (double k : ks) c_ref.push_back(collocation::solve_forward(ut, ref_op, k).c);

  const std::vector<int> orders = {16, 24, 32, 48, 64, 96};
  std::vector<double> eps;
  for (int nz : orders) {
    const auto op = testutil::unit_op(nz);
    double worst = 0.0;
    for (size_t i = 0; i < ks.size(); ++i) {
      const double c = collocation::solve_forward(ut, op, ks[i]).c;
      worst = std::max(worst, std::abs(c - c_ref[i]) / std::abs(c_ref[i]));
    }
    eps.push_back(worst);
  }

  bool geometric = true;
  for (size_t j = 1; j + 2 < eps.size(); ++j)  // 16->24->32->48
    geometric = geometric && eps[j] < 0.5 * eps[j - 1];
  const bool resolved = eps[4] <= 1e-8;
  const bool plateau = eps[5] <= 1e-9;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "eps: %.1e %.1e %.1e %.1e %.1e %.1e (geometric=%d, "
                "eps(64)<=1e-8=%d, plateau=%d)",
                eps[0], eps[1], eps[2], eps[3], eps[4], eps[5], geometric,
                resolved, plateau);
  return {geometric && resolved && plateau, buf};
}

// 4. Radial continuation agrees with the direct solver at 500 random radii to
//    1e-8 with a fast build and sub-0.1 s batch query.
Outcome criterion4() {
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto op = testutil::unit_op(64);
  pathfollow::PathOptions opts;
  opts.tol = 1e-9;
  opts.log_k = true;

  double t0 = now_seconds();
  const auto path = pathfollow::pf_radial(ut, op, 0.025, 25.0,
                                          std::sqrt(0.025 * 25.0), opts);
  const double build = now_seconds() - t0;

  std::mt19937 rng(71);
  std::uniform_real_distribution<double> ud(std::log(0.025), std::log(25.0));
  std::vector<double> ks(500);
  for (auto& k : ks) k = std::exp(ud(rng));

  t0 = now_seconds();
  std::vector<double> cs(ks.size());
  for (size_t i = 0; i < ks.size(); ++i)
    cs[i] = pathfollow::dense_eval_c(path, ks[i]);
  const double query = now_seconds() - t0;

  double worst = 0.0;
  for (size_t i = 0; i < ks.size(); ++i) {
    const double ref = collocation::solve_forward(ut, op, ks[i]).c;
    worst = std::max(worst, std::abs(cs[i] - ref) / std::abs(ref));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max rel err %.2e (limit 1e-8), build %.1f s (limit 20), "
                "500 queries %.3f s (limit 0.1)",
                worst, build, query);
  return {worst <= 1e-8 && build < 20.0 && query < 0.1, buf};
}

// 5. Interpolation error tracks the continuation tolerance over four decades.
Outcome criterion5() {
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto op = testutil::unit_op(48);
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> kd(0.25, 2.5);
  std::vector<double> ks(100);
  for (auto& k : ks) k = kd(rng);
  std::vector<double> refs(ks.size());
  for (size_t i = 0; i < ks.size(); ++i)
    refs[i] = collocation::solve_forward(ut, op, ks[i]).c;

  const std::vector<double> tols = {1e-5, 1e-7, 1e-9};
  std::vector<double> errs;
  bool within = true;
  for (double tol : tols) {
    pathfollow::PathOptions opts;
    opts.tol = tol;
    const auto path = pathfollow::pf_radial(ut, op, 0.25, 2.5, 1.0, opts);
    double worst = 0.0;
    for (size_t i = 0; i < ks.size(); ++i)
      worst = std::max(worst,
                       std::abs(pathfollow::dense_eval_c(path, ks[i]) - refs[i]));
    errs.push_back(worst);
    within = within && worst <= 10.0 * tol;
  }
  const bool ordered = errs[0] > errs[2];
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "err(1e-5)=%.1e err(1e-7)=%.1e err(1e-9)=%.1e "
                "(each <= 10x tol: %d, decreasing: %d)",
                errs[0], errs[1], errs[2], within, ordered);
  return {within && ordered, buf};
}

// 6. Polar field with 64 radius and 64 angle knots answers scattered queries
//    within an interpolation bound calibrated on a coarse field, at more than
//    100x the rate of direct production-order (N_z = 64) solves.
Outcome criterion6() {
  const auto p2d = shear::builtin_profile("UT");
  const auto op = testutil::unit_op(32);
  pathfollow::PathOptions opts;
  opts.tol = 1e-9;
  const auto radii = testutil::log_spaced(0.25, 4.0, 64);

  const auto angles = [](int j) {
    std::vector<double> out(static_cast<size_t>(j));
    for (int i = 0; i < j; ++i) out[static_cast<size_t>(i)] = 2.0 * M_PI * i / j;
    return out;
  };

  std::mt19937 rng(79);
  std::uniform_real_distribution<double> kd(0.25, 4.0), td(0.0, 2.0 * M_PI);
  std::vector<std::pair<double, double>> pts(500);
  for (auto& p : pts) p = {kd(rng), td(rng)};

  // Calibrate the angular interpolation constant on a 16-knot field.
  const auto coarse = grid::build_field(p2d, op, radii, angles(16), 1.0, opts, 4);
  double err16 = 0.0;
  for (size_t i = 0; i < 100; ++i) {
    const auto [k, th] = pts[i];
    const double ref = collocation::solve_forward(shear::project(p2d, th), op, k).c;
    err16 = std::max(err16, std::abs(coarse.query_c(k, th) - ref));
  }
  const double dth16 = 2.0 * M_PI / 16.0, dth64 = 2.0 * M_PI / 64.0;
  const double c_const = 2.0 * err16 / std::pow(dth16, 4);
  const double bound = std::max(1e-6, c_const * std::pow(dth64, 4));

  const auto field = grid::build_field(p2d, op, radii, angles(64), 1.0, opts, 4);
  double worst = 0.0;
  double t0 = now_seconds();
  std::vector<double> cs(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    cs[i] = field.query_c(pts[i].first, pts[i].second);
  const double t_field = now_seconds() - t0;

  // Accuracy against the direct solver on the field's own grid (isolates the
  // interpolation error); cost against a production-order direct solve.
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto [k, th] = pts[i];
    const double ref = collocation::solve_forward(shear::project(p2d, th), op, k).c;
    worst = std::max(worst, std::abs(cs[i] - ref));
  }
  const auto op64 = testutil::unit_op(64);
  t0 = now_seconds();
  for (size_t i = 0; i < 100; ++i) {
    const auto [k, th] = pts[i];
    volatile double sink =
        collocation::solve_forward(shear::project(p2d, th), op64, k).c;
    (void)sink;
  }
  const double t_direct = (now_seconds() - t0) * (500.0 / 100.0);

  const double speedup = t_direct / std::max(t_field, 1e-12);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max err %.2e (bound %.2e), query speedup %.0fx (limit 100x)",
                worst, bound, speedup);
  return {worst <= bound && speedup >= 100.0, buf};
}

// 7. Partition of unity: unit sum everywhere on the band and C0 across the
//    overlap edges.
Outcome criterion7() {
  const auto plan = depth::build_plan(std::ldexp(1.0, -52), 0.3, 0.8, 250.0);
  double sum_err = 0.0;
  for (double k : testutil::log_spaced(0.025, 250.0, 10000)) {
    const auto w = depth::pu_weights(plan, k);
    double s = 0.0;
    for (const auto& e : w) s += e.value;
    sum_err = std::max(sum_err, std::abs(s - 1.0));
  }
  double jump = 0.0;
  for (size_t j = 1; j < plan.intervals.size(); ++j) {
    for (double edge : {plan.intervals[j].k_lo, plan.intervals[j - 1].k_hi}) {
      if (edge <= 0.025 || edge >= 250.0) continue;
      const auto lo = depth::pu_weights(plan, edge * (1.0 - 1e-9));
      const auto hi = depth::pu_weights(plan, edge * (1.0 + 1e-9));
      const auto value_of = [](const std::vector<depth::Weight>& ws, int j2) {
        for (const auto& e : ws)
          if (e.interval == j2) return e.value;
        return 0.0;
      };
      for (int iv = 0; iv < static_cast<int>(plan.intervals.size()); ++iv)
        jump = std::max(jump, std::abs(value_of(lo, iv) - value_of(hi, iv)));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max |sum - 1| = %.1e (limit 1e-12), max edge jump %.1e (limit 1e-8)",
                sum_err, jump);
  return {sum_err <= 1e-12 && jump <= 1e-8, buf};
}

// 8. The continuation linear solves are markedly better conditioned in
//    backward error than the quadratic eigensolves they replace, with
//    comparable condition numbers.
Outcome criterion8() {
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto op = testutil::unit_op(64);
  const auto rep = diag::stability_sweep(ut, op, testutil::log_spaced(0.25, 2.5, 20));
  const bool better = rep.eta_l_median < rep.eta_q_median;
  const double ratio =
      std::max(rep.kappa_l_median, rep.kappa_q_median) /
      std::min(rep.kappa_l_median, rep.kappa_q_median);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "median eta_L %.1e < median eta_Q %.1e: %d; kappa medians "
                "%.1e vs %.1e (ratio %.1f, limit 100)",
                rep.eta_l_median, rep.eta_q_median, better, rep.kappa_l_median,
                rep.kappa_q_median, ratio);
  return {better && ratio <= 100.0, buf};
}

// 9. Cost model: direct solve time is linear in the query count, dense path
//    queries are >= 100x cheaper per point at the tight target, and the
//    build-cost break-even shrinks as the accuracy target tightens.
Outcome criterion9() {
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  diag::BenchmarkConfig cfg;
  cfg.n_q = {100, 1000, 10000};
  cfg.targets = {{1e-4, 12, 1e-5}, {1e-7, 32, 1e-8}};
  cfg.reps = 5;
  const auto rows = diag::run_benchmark(ut, cfg);

  const auto pick = [&](const std::string& m, int nq, double eps,
                        const std::string& ph) {
    for (const auto& r : rows)
      if (r.method == m && r.n_q == nq && r.target_eps == eps && r.phase == ph)
        return r.median_seconds;
    return -1.0;
  };

  bool linear_ok = true;
  double breakeven[2] = {0.0, 0.0};
  double margin = 0.0;
  int ti = 0;
  for (const auto& t : cfg.targets) {
    const double c1 = pick("CL-c", 100, t.eps, "total");
    const double c2 = pick("CL-c", 1000, t.eps, "total");
    const double c3 = pick("CL-c", 10000, t.eps, "total");
    const double slope = std::log(c3 / c1) / std::log(100.0);
    linear_ok = linear_ok && slope > 0.85 && slope < 1.15;

    const double build = pick("PF", 0, t.eps, "build");
    const double per_cl = c3 / 10000.0;
    const double per_pf = pick("PF", 10000, t.eps, "query") / 10000.0;
    breakeven[ti] = build / (per_cl - per_pf);
    if (t.eps == 1e-7) margin = per_cl / per_pf;
    ++ti;
  }
  const bool cheap = margin >= 100.0;
  const bool shrinking = breakeven[1] < breakeven[0];
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "slope linear=%d; per-query margin %.0fx (limit 100x); "
                "break-even %.1f -> %.1f queries (shrinking=%d)",
                linear_ok, margin, breakeven[0], breakeven[1], shrinking);
  return {linear_ok && cheap && shrinking, buf};
}

// 10. Randomised invariants re-sampled in-process: operator exactness,
//     partition-of-unity sums, and continuation/direct agreement. The full
//     per-module property suites run in the unit binary alongside this gate.
Outcome criterion10() {
  std::mt19937 rng(83);
  int failures = 0;

  // Differentiation exactness on random monomials, 100 cases.
  std::uniform_int_distribution<int> order_dist(8, 48);
  for (int trial = 0; trial < 100; ++trial) {
    const int nz = order_dist(rng);
    const auto op = spectral::make_operator(nz);
    std::uniform_int_distribution<int> pd(1, std::min(nz, 8));
    const int p = pd(rng);
    const Eigen::VectorXd zp = op.nodes.array().pow(p);
    const Eigen::VectorXd dzp = op.nodes.array().pow(p - 1) * p;
    if ((op.d1 * zp - dzp).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, dzp.cwiseAbs().maxCoeff()))
      ++failures;
  }

  // Partition-of-unity sums at random radii, 100 cases.
  const auto plan = depth::build_plan(std::ldexp(1.0, -52), 0.3, 0.8, 250.0);
  std::uniform_real_distribution<double> kb(0.025, 250.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = depth::pu_weights(plan, kb(rng));
    double s = 0.0;
    for (const auto& e : w) s += e.value;
    if (std::abs(s - 1.0) > 1e-12) ++failures;
  }

  // Continuation vs direct solver at random radii, 100 cases.
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto op = testutil::unit_op(48);
  pathfollow::PathOptions opts;
  opts.tol = 1e-9;
  const auto path = pathfollow::pf_radial(ut, op, 0.25, 2.5, 1.0, opts);
  std::uniform_real_distribution<double> kd(0.25, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    const double k = kd(rng);
    const double a = pathfollow::dense_eval_c(path, k);
    const double b = collocation::solve_forward(ut, op, k).c;
    if (std::abs(a - b) > 1e-8) ++failures;
  }

  char buf[120];
  std::snprintf(buf, sizeof buf, "300 randomized cases, %d failures", failures);
  return {failures == 0, buf};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion: %s\n", argv[i]);
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n)
      selected.push_back(n);

  bool all_pass = true;
  for (int n : selected) {
    Outcome out;
    try {
      out = criteria[static_cast<size_t>(n - 1)]();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s (%s)\n", n, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
