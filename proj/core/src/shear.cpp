#include "wavedisp/shear.hpp"

#include <cmath>
#include <stdexcept>

namespace wavedisp::shear {

namespace {

const ScalarFn kZero = [](double) { return 0.0; };

// Golden-section search for the minimum of f on [a, b].
double golden_min(const ScalarFn& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

ShearProfile ut_profile(const UtParams& p, double froude_sq) {
  const double al = p.alpha, be = p.beta, ga = p.gamma, de = p.delta;
  ShearProfile s;
  s.name = "UT";
  s.froude_sq = froude_sq;
  s.ux = [=](double z) {
    return 0.5 * ga * (1.0 + de * z) * std::cos(be * std::pow(-z, al)) + 0.5;
  };
  s.dux = [=](double z) {
    const double t = std::pow(-z, al);
    const double sn = std::sin(be * t), cs = std::cos(be * t);
    const double pm1 = std::pow(-z, al - 1.0);
    return 0.5 * ga * (de * cs + (1.0 + de * z) * al * be * pm1 * sn);
  };
  s.ddux = [=](double z) {
    const double t = std::pow(-z, al);
    const double sn = std::sin(be * t), cs = std::cos(be * t);
    const double pm1 = std::pow(-z, al - 1.0);
    const double pm2 = al > 1.0 ? std::pow(-z, al - 2.0) : 0.0;
    return 0.5 * ga *
           (2.0 * de * al * be * pm1 * sn +
            (1.0 + de * z) * (-al * be * (al - 1.0) * pm2 * sn -
                              al * al * be * be * pm1 * pm1 * cs));
  };
  s.uy = s.duy = s.dduy = kZero;
  return s;
}

ShearProfile quiescent_profile(double froude_sq) {
  ShearProfile s;
  s.name = "quiescent";
  s.froude_sq = froude_sq;
  s.ux = s.dux = s.ddux = kZero;
  s.uy = s.duy = s.dduy = kZero;
  return s;
}

ShearProfile linear_profile(double a, double b, double froude_sq) {
  ShearProfile s;
  s.name = "linear";
  s.froude_sq = froude_sq;
  s.ux = [=](double z) { return a * (z + 1.0) + b; };
  s.dux = [=](double) { return a; };
  s.ddux = kZero;
  s.uy = s.duy = s.dduy = kZero;
  return s;
}

ShearProfile make_polynomial_profile(const std::vector<double>& cx,
                                     const std::vector<double>& cy,
                                     double froude_sq, const std::string& name) {
  auto horner = [](std::vector<double> c) {
    return [c = std::move(c)](double z) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
      return v;
    };
  };
  auto derive = [](const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    return d;
  };
  ShearProfile s;
  s.name = name;
  s.froude_sq = froude_sq;
  const auto dcx = derive(cx), ddcx = derive(dcx);
  const auto dcy = derive(cy), ddcy = derive(dcy);
  s.ux = horner(cx);
  s.dux = horner(dcx);
  s.ddux = horner(ddcx);
  s.uy = horner(cy);
  s.duy = horner(dcy);
  s.dduy = horner(ddcy);
  return s;
}

ShearProfile compose_profile(const ShearProfile& x_component,
                             const ShearProfile& y_component) {
  ShearProfile s;
  s.name = x_component.name + "+" + y_component.name;
  s.froude_sq = x_component.froude_sq;
  s.ux = x_component.ux;
  s.dux = x_component.dux;
  s.ddux = x_component.ddux;
  s.uy = y_component.ux;
  s.duy = y_component.dux;
  s.dduy = y_component.ddux;
  return s;
}

ShearProfile builtin_profile(const std::string& name, double froude_sq) {
  if (name == "UT") return ut_profile({}, froude_sq);
  if (name == "quiescent") return quiescent_profile(froude_sq);
  if (name == "linear") return linear_profile(1.0, 0.0, froude_sq);
  if (name == "polynomial") return make_polynomial_profile({}, {}, froude_sq);
  throw std::invalid_argument("unknown builtin profile: " + name);
}

ReducedProfile project(const ShearProfile& p, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  ReducedProfile r;
  r.name = p.name;
  r.froude_sq = p.froude_sq;
  r.angle = theta;
  r.u = [=, ux = p.ux, uy = p.uy](double z) { return ct * ux(z) + st * uy(z); };
  r.du = [=, ux = p.dux, uy = p.duy](double z) { return ct * ux(z) + st * uy(z); };
  r.ddu = [=, ux = p.ddux, uy = p.dduy](double z) { return ct * ux(z) + st * uy(z); };
  return r;
}

ReducedProfile angular_derivative(const ShearProfile& p, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  ReducedProfile r;
  r.name = p.name + "'";
  r.froude_sq = p.froude_sq;
  r.angle = theta;
  r.u = [=, ux = p.ux, uy = p.uy](double z) { return -st * ux(z) + ct * uy(z); };
  r.du = [=, ux = p.dux, uy = p.duy](double z) { return -st * ux(z) + ct * uy(z); };
  r.ddu = [=, ux = p.ddux, uy = p.dduy](double z) { return -st * ux(z) + ct * uy(z); };
  return r;
}

ReducedProfile as_reduced(const ShearProfile& p) { return project(p, 0.0); }

SampledShear sample(const ReducedProfile& p, const spectral::CollocationOperator& op) {
  const Eigen::Index n = op.nodes.size();
  SampledShear s;
  s.u.resize(n);
  s.du.resize(n);
  s.ddu.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double z = op.nodes[j];
    if (z < -1.0 - 1e-12 || z > 1e-12)
      throw std::invalid_argument("sample: node outside profile domain [-1,0]");
    s.u[j] = p.u(z);
    s.du[j] = p.du(z);
    s.ddu[j] = p.ddu(z);
  }
  return s;
}

SampledShear2D sample(const ShearProfile& p, const spectral::CollocationOperator& op) {
  const Eigen::Index n = op.nodes.size();
  SampledShear2D s;
  s.ux.resize(n);
  s.dux.resize(n);
  s.ddux.resize(n);
  s.uy.resize(n);
  s.duy.resize(n);
  s.dduy.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double z = op.nodes[j];
    if (z < -1.0 - 1e-12 || z > 1e-12)
      throw std::invalid_argument("sample: node outside profile domain [-1,0]");
    s.ux[j] = p.ux(z);
    s.dux[j] = p.dux(z);
    s.ddux[j] = p.ddux(z);
    s.uy[j] = p.uy(z);
    s.duy[j] = p.duy(z);
    s.dduy[j] = p.dduy(z);
  }
  return s;
}

SampledShear project(const SampledShear2D& s, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  SampledShear out;
  out.u = ct * s.ux + st * s.uy;
  out.du = ct * s.dux + st * s.duy;
  out.ddu = ct * s.ddux + st * s.dduy;
  return out;
}

SampledShear angular_derivative(const SampledShear2D& s, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  SampledShear out;
  out.u = -st * s.ux + ct * s.uy;
  out.du = -st * s.dux + ct * s.duy;
  out.ddu = -st * s.ddux + ct * s.dduy;
  return out;
}

Eigen::VectorXd interior(const Eigen::VectorXd& grid_vector) {
  return grid_vector.segment(1, grid_vector.size() - 2);
}

EssentialRange essential_range(const ReducedProfile& p, int samples) {
  double lo = p.u(0.0), hi = lo;
  double arg_lo = 0.0, arg_hi = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double z = -1.0 + static_cast<double>(i) / samples;
    const double v = p.u(z);
    if (v < lo) {
      lo = v;
      arg_lo = z;
    }
    if (v > hi) {
      hi = v;
      arg_hi = z;
    }
  }
  const double dz = 1.0 / samples;
  const auto neg = [&p](double z) { return -p.u(z); };
  lo = std::min(lo, golden_min(p.u, std::max(-1.0, arg_lo - dz),
                               std::min(0.0, arg_lo + dz), 1e-10));
  hi = std::max(hi, -golden_min(neg, std::max(-1.0, arg_hi - dz),
                                std::min(0.0, arg_hi + dz), 1e-10));
  return {lo, hi};
}

}  // namespace wavedisp::shear
