#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wavedisp/shear.hpp"

using namespace wavedisp;

namespace {

double fd1(const shear::ScalarFn& f, double z, double h = 1e-6) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("shear") {

TEST_CASE("UT endpoint values") {
  const auto p = shear::builtin_profile("UT");
  CHECK(p.ux(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.ux(-1.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(p.froude_sq == 0.05);
  CHECK(p.uy(0.0) == 0.0);
  CHECK(p.uy(-0.5) == 0.0);
}

TEST_CASE("unknown profile rejected") {
  CHECK_THROWS_AS(shear::builtin_profile("whirlpool"), std::invalid_argument);
}

TEST_CASE("builtin derivative consistency (finite differences)") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> zd(-0.99, -0.01);
  for (const char* name : {"UT", "linear", "quiescent"}) {
    const auto p = shear::builtin_profile(name);
    for (int trial = 0; trial < 100; ++trial) {
      const double z = zd(rng);
      const double scale = std::max(1.0, std::abs(p.dux(z)));
      CHECK(std::abs(p.dux(z) - fd1(p.ux, z)) < 1e-6 * scale);
      const double scale2 = std::max(1.0, std::abs(p.ddux(z)));
      CHECK(std::abs(p.ddux(z) - fd1(p.dux, z)) < 1e-6 * scale2);
    }
  }
}

TEST_CASE("polynomial profile evaluates and differentiates") {
  // U_x = 1 + 2 z + 3 z^2
  const auto p = shear::make_polynomial_profile({1.0, 2.0, 3.0}, {}, 0.05);
  CHECK(p.ux(-0.5) == doctest::Approx(1.0 - 1.0 + 0.75).epsilon(1e-14));
  CHECK(p.dux(-0.5) == doctest::Approx(2.0 - 3.0).epsilon(1e-14));
  CHECK(p.ddux(-0.5) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(p.uy(-0.3) == 0.0);
}

TEST_CASE("projection identities") {
  const auto p = shear::builtin_profile("UT");
  const auto at0 = shear::project(p, 0.0);
  const auto at90 = shear::project(p, M_PI / 2.0);
  for (double z : {-0.9, -0.41, 0.0}) {
    CHECK(at0.u(z) == p.ux(z));
    CHECK(std::abs(at90.u(z) - p.uy(z)) < 1e-16);
  }

  // U_x = U_y = f at 45 degrees gives sqrt(2) f.
  const auto twin = shear::compose_profile(p, p);
  const auto at45 = shear::project(twin, M_PI / 4.0);
  for (double z : {-0.7, -0.2})
    CHECK(at45.u(z) == doctest::Approx(std::sqrt(2.0) * p.ux(z)).epsilon(1e-14));
}

TEST_CASE("angular derivative identities") {
  const auto p = shear::builtin_profile("UT");
  const auto d0 = shear::angular_derivative(p, 0.0);
  const auto d90 = shear::angular_derivative(p, M_PI / 2.0);
  for (double z : {-0.8, -0.33}) {
    CHECK(std::abs(d0.u(z) - p.uy(z)) < 1e-16);
    CHECK(d90.u(z) == doctest::Approx(-p.ux(z)).epsilon(1e-14));
  }
}

TEST_CASE("angular derivative equals d/dtheta of projection") {
  const auto base = shear::builtin_profile("UT");
  const auto quiet = shear::builtin_profile("quiescent");
  const auto p = shear::compose_profile(
      base, shear::linear_profile(0.3, 0.1, base.froude_sq));
  (void)quiet;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> th(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> zd(-1.0, 0.0);
  const double eps = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = th(rng);
    const double z = zd(rng);
    const auto lo = shear::project(p, theta - eps);
    const auto hi = shear::project(p, theta + eps);
    const auto dd = shear::angular_derivative(p, theta);
    CHECK(std::abs((hi.u(z) - lo.u(z)) / (2.0 * eps) - dd.u(z)) < 1e-8);
  }
}

TEST_CASE("sample on a collocation grid") {
  const auto op = testutil::unit_op(2);  // nodes {0, -1/2, -1}
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  const auto s = shear::sample(ut, op);
  CHECK(s.u.size() == 3);
  CHECK(s.u[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.u[1] == doctest::Approx(ut.u(-0.5)).epsilon(1e-14));
  CHECK(s.u[2] == doctest::Approx(0.75).epsilon(1e-14));

  const auto quiet = shear::as_reduced(shear::builtin_profile("quiescent"));
  const auto sq = shear::sample(quiet, op);
  CHECK(sq.u.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sq.ddu.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interior restriction drops endpoints") {
  Eigen::VectorXd v(5);
  v << 10, 1, 2, 3, 20;
  const Eigen::VectorXd in = shear::interior(v);
  CHECK(in.size() == 3);
  CHECK(in[0] == 1);
  CHECK(in[2] == 3);
}

TEST_CASE("essential range closed forms") {
  const auto quiet = shear::as_reduced(shear::builtin_profile("quiescent"));
  const auto rq = shear::essential_range(quiet);
  CHECK(rq.lo == 0.0);
  CHECK(rq.hi == 0.0);

  const auto lin = shear::as_reduced(shear::linear_profile(1.0, 0.0));
  const auto rl = shear::essential_range(lin);
  CHECK(rl.lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rl.hi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("essential range of UT matches brute force") {
  const auto ut = shear::as_reduced(shear::builtin_profile("UT"));
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 1000000; ++i) {
    const double u = ut.u(-1.0 + i / 1000000.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  const auto r = shear::essential_range(ut);
  CHECK(r.lo == doctest::Approx(lo).epsilon(1e-8));
  CHECK(r.hi == doctest::Approx(hi).epsilon(1e-8));
  CHECK(r.hi == doctest::Approx(1.0).epsilon(1e-10));
}

}  // TEST_SUITE
