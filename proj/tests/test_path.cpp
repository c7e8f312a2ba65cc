#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wavedisp/collocation.hpp"
#include "wavedisp/errors.hpp"
#include "wavedisp/path_following.hpp"
#include "wavedisp/shear.hpp"

using namespace wavedisp;

namespace {

Eigen::VectorXd scalar(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

}  // namespace

TEST_SUITE("path") {

TEST_CASE("single step: constant and exponential") {
  const auto zero = [](double, const Eigen::VectorXd& y) {
    return Eigen::VectorXd::Zero(y.size()).eval();
  };
  auto r = pathfollow::dopri_step(zero, 0.0, scalar(2.5), 0.3);
  CHECK(r.y_next[0] == 2.5);
  CHECK(r.error.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.y_mid[0] == 2.5);

  const auto exp_rhs = [](double, const Eigen::VectorXd& y) { return y; };
  r = pathfollow::dopri_step(exp_rhs, 0.0, scalar(1.0), 0.1);
  CHECK(r.y_next[0] == doctest::Approx(std::exp(0.1)).epsilon(1e-8));
  CHECK(r.y_mid[0] == doctest::Approx(std::exp(0.05)).epsilon(1e-8));
  CHECK(r.f_next[0] == doctest::Approx(r.y_next[0]).epsilon(1e-15));
}

TEST_CASE("single step: exact on quartics") {
  // y' = t^3, y(1) = 0 -> y(1+h) = ((1+h)^4 - 1)/4 up to roundoff.
  const auto cubic = [](double t, const Eigen::VectorXd& y) {
    return scalar(t * t * t).eval();
  };
  const double h = 0.7;
  const auto r = pathfollow::dopri_step(cubic, 1.0, scalar(0.0), h);
  const double exact = (std::pow(1.0 + h, 4) - 1.0) / 4.0;
  CHECK(r.y_next[0] == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive integration of the exponential") {
  const auto exp_rhs = [](double, const Eigen::VectorXd& y) { return y; };
  size_t prev_steps = 0;
  for (double tol : {1e-5, 1e-7, 1e-9, 1e-11}) {
    const auto sol = pathfollow::adaptive_integrate(exp_rhs, 0.0, 1.0,
                                                    scalar(1.0), tol);
    CHECK(std::abs(sol.v.back()[0] - std::exp(1.0)) < 50.0 * tol * std::exp(1.0));
    CHECK(sol.t.size() > prev_steps);
    prev_steps = sol.t.size();
    CHECK(sol.t.front() == 0.0);
    CHECK(sol.t.back() == 1.0);
  }
}

TEST_CASE("path bookkeeping: midpoints sit inside their intervals") {
  const auto rhs = [](double t, const Eigen::VectorXd& y) {
    return scalar(std::cos(3.0 * t) * y[0]).eval();
  };
  const auto sol = pathfollow::adaptive_integrate(rhs, 0.0, 2.0, scalar(1.0), 1e-8);
  REQUIRE(sol.t.size() >= 3);
  CHECK(sol.t_mid.size() == sol.t.size() - 1);
  CHECK(sol.v_mid.size() == sol.t_mid.size());
  CHECK(sol.vdot.size() == sol.t.size());
  for (size_t j = 0; j + 1 < sol.t.size(); ++j) {
    CHECK(sol.t[j] < sol.t[j + 1]);
    CHECK(sol.t_mid[j] > sol.t[j]);
    CHECK(sol.t_mid[j] < sol.t[j + 1]);
  }
}

TEST_CASE("dense output: exact at control points, accurate between") {
  const auto exp_rhs = [](double, const Eigen::VectorXd& y) { return y; };
  const double tol = 1e-9;
  const auto sol = pathfollow::adaptive_integrate(exp_rhs, 0.0, 1.0, scalar(1.0), tol);
  for (size_t j = 0; j < sol.t.size(); ++j)
    CHECK(pathfollow::dense_eval_c(sol, sol.t[j]) == sol.v[j][0]);
  for (size_t j = 0; j < sol.t_mid.size(); ++j)
    CHECK(pathfollow::dense_eval_c(sol, sol.t_mid[j]) ==
          doctest::Approx(sol.v_mid[j][0]).epsilon(1e-14));

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> td(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double tq = td(rng);
    const double err = std::abs(pathfollow::dense_eval_c(sol, tq) - std::exp(tq));
    CHECK(err < 10.0 * tol * std::exp(tq));
  }
  CHECK_THROWS_AS(pathfollow::dense_eval_c(sol, 1.5), std::out_of_range);
  // Queries within roundoff of the endpoints are clamped, not rejected.
  CHECK_NOTHROW(pathfollow::dense_eval_c(sol, 1.0 + 1e-14));
}

TEST_CASE("tangent system: tangency and pencil consistency") {
  const auto op = testutil::unit_op(48);
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const double k = 1.4;
  const auto sol = collocation::solve_forward(ut, op, k);
  const Eigen::VectorXd w = sol.real_eigenvector();

  const auto sys = pathfollow::assemble_radial(ut, op, k, sol.c, w);
  CHECK(sys.m.rows() == w.size() + 1);
  CHECK(sys.b[sys.b.size() - 1] == 0.0);
  const auto tan = pathfollow::derivative(sys, k);
  CHECK(std::abs(w.dot(tan.wdot)) <= 1e-10);
}

TEST_CASE("radial tangent matches finite differences of the direct solver") {
  const auto op = testutil::unit_op(48);
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  for (double k : {0.4, 1.0, 2.7}) {
    const auto sol = collocation::solve_forward(ut, op, k);
    const auto sys =
        pathfollow::assemble_radial(ut, op, k, sol.c, sol.real_eigenvector());
    const auto tan = pathfollow::derivative(sys, k);
    const double eps = 1e-5;
    const double fd = (collocation::solve_forward(ut, op, k + eps).c -
                       collocation::solve_forward(ut, op, k - eps).c) /
                      (2.0 * eps);
    CHECK(tan.cdot == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("angular tangent vanishes for a purely streamwise current") {
  const auto p2d = shear::builtin_profile("UT");  // U_y = 0
  const auto op = testutil::unit_op(48);
  const double k0 = 1.2;
  const auto sol = collocation::solve_forward(shear::project(p2d, 0.0), op, k0);
  const auto sys = pathfollow::assemble_angular(p2d, op, 0.0, k0, sol.c,
                                                sol.real_eigenvector());
  const auto tan = pathfollow::derivative(sys, 0.0);
  CHECK(std::abs(tan.cdot) < 1e-10);
  CHECK(tan.wdot.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("radial and angular systems share the same matrix") {
  const auto p2d = shear::builtin_profile("UT");
  const auto op = testutil::unit_op(32);
  const double theta = 0.37, k0 = 1.6;
  const auto reduced = shear::project(p2d, theta);
  const auto sol = collocation::solve_forward(reduced, op, k0);
  const Eigen::VectorXd w = sol.real_eigenvector();
  const auto rad = pathfollow::assemble_radial(reduced, op, k0, sol.c, w);
  const auto ang = pathfollow::assemble_angular(p2d, op, theta, k0, sol.c, w);
  CHECK((rad.m - ang.m).cwiseAbs().maxCoeff() == 0.0);
  CHECK((rad.b - ang.b).cwiseAbs().maxCoeff() > 0.0);  // only R differs
}

TEST_CASE("radial continuation reproduces the direct solver") {
  const auto op = testutil::unit_op(48);
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  pathfollow::PathOptions opts;
  opts.tol = 1e-9;
  const auto path = pathfollow::pf_radial(ut, op, 0.25, 2.5, 1.0, opts);
  CHECK(path.t_min() == 0.25);
  CHECK(path.t_max() == 2.5);

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> kd(0.25, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    const double k = kd(rng);
    const double c_path = pathfollow::dense_eval_c(path, k);
    const double c_ref = collocation::solve_forward(ut, op, k).c;
    CHECK(std::abs(c_path - c_ref) < 10.0 * opts.tol * std::max(1.0, std::abs(c_ref)));
  }

  // Dense eigenvector query stays unit scale at the control points.
  const auto dv = pathfollow::dense_eval(path, path.t[1], true);
  CHECK(dv.w.size() == 48);
  CHECK(dv.w.norm() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("logarithmic parameterisation covers wide ranges") {
  const auto op = testutil::unit_op(48);
  const auto quiet = shear::as_reduced(shear::builtin_profile("quiescent"));
  pathfollow::PathOptions opts;
  opts.tol = 1e-10;
  opts.log_k = true;
  const auto path = pathfollow::pf_radial(quiet, op, 0.25, 25.0, 2.0, opts);
  for (double k : testutil::log_spaced(0.25, 25.0, 40)) {
    const double c = pathfollow::dense_eval_c(path, k);
    CHECK(c == doctest::Approx(testutil::quiescent_c(k, 0.05)).epsilon(1e-7));
  }
}

TEST_CASE("degenerate interval returns the seed point") {
  const auto op = testutil::unit_op(32);
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto path = pathfollow::pf_radial(ut, op, 1.0, 1.0, 1.0);
  CHECK(path.t.size() == 1);
  CHECK(pathfollow::dense_eval_c(path, 1.0) ==
        doctest::Approx(collocation::solve_forward(ut, op, 1.0).c).epsilon(1e-12));
}

TEST_CASE("angular sweep hits the crossflow closed form") {
  // x-component UT, y-component quiescent: theta = pi/2 kills the shear.
  const auto p2d = shear::builtin_profile("UT");
  const auto op = testutil::unit_op(48);
  const double k0 = 1.5;
  pathfollow::PathOptions opts;
  opts.tol = 1e-10;
  const auto path = pathfollow::pf_angular(p2d, op, k0, 0.0, M_PI / 2.0, 0.0, opts);
  const double c90 = pathfollow::dense_eval_c(path, M_PI / 2.0);
  CHECK(c90 == doctest::Approx(testutil::quiescent_c(k0, 0.05)).epsilon(1e-8));
  // And against the direct solver at an interior angle.
  const double th = 0.9;
  const double c_ref =
      collocation::solve_forward(shear::project(p2d, th), op, k0).c;
  CHECK(pathfollow::dense_eval_c(path, th) == doctest::Approx(c_ref).epsilon(1e-8));
}

TEST_CASE("seed records round-trip at full precision") {
  const auto op = testutil::unit_op(32);
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto sol = collocation::solve_forward(ut, op, 1.1);
  const auto rec = pathfollow::make_seed_record(sol, op, ut);
  const auto back = pathfollow::seed_from_json(pathfollow::seed_to_json(rec));
  const auto imported = pathfollow::import_seed(back, ut, op);
  CHECK(imported.k == sol.k);
  CHECK(imported.c == sol.c);
  CHECK((imported.w - sol.w).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("seed validation rejects mismatches and stale data") {
  const auto op = testutil::unit_op(32);
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto sol = collocation::solve_forward(ut, op, 1.1);
  const auto rec = pathfollow::make_seed_record(sol, op, ut);

  const auto op2 = testutil::unit_op(48);
  CHECK_THROWS_AS(pathfollow::import_seed(rec, ut, op2), InvalidSeedError);

  const auto quiet = shear::as_reduced(shear::builtin_profile("quiescent"));
  CHECK_THROWS_AS(pathfollow::import_seed(rec, quiet, op), InvalidSeedError);

  auto stale = rec;
  stale.c = "3.0";
  CHECK_THROWS_AS(pathfollow::import_seed(stale, ut, op), StaleSeedError);
}

}  // TEST_SUITE
