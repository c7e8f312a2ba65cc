#include "wavedisp/polar_field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wavedisp/errors.hpp"

namespace wavedisp::grid {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Cubic Hermite on [t0, t1] through (y0, yd0), (y1, yd1).
Eigen::VectorXd hermite(double t0, double t1, const Eigen::VectorXd& y0,
                        const Eigen::VectorXd& yd0, const Eigen::VectorXd& y1,
                        const Eigen::VectorXd& yd1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * yd0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * yd1;
}

double hermite(double t0, double t1, double y0, double yd0, double y1,
               double yd1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * yd0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * yd1;
}

// Largest m with knots[m] <= t, clamped so m+1 is valid.
int bracket(const std::vector<double>& knots, double t) {
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  int m = static_cast<int>(it - knots.begin()) - 1;
  return std::clamp(m, 0, static_cast<int>(knots.size()) - 2);
}

void check_knots(const std::vector<double>& knots, const char* label) {
  if (knots.size() < 2)
    throw std::invalid_argument(std::string(label) + ": need at least 2 knots");
  for (size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw std::invalid_argument(std::string(label) +
                                  ": knots must be strictly increasing");
}

}  // namespace

struct SliceEval {
  double c = 0.0;
  Eigen::VectorXd w;
};

// Radial cubic Hermite evaluation of one slice; exact at the radius knots.
static SliceEval eval_slice(const std::vector<double>& k,
                            const RadialSlice& slice, double k_q) {
  SliceEval out;
  const int n1 = static_cast<int>(slice.v.front().size());
  for (size_t i = 0; i < k.size(); ++i) {
    if (k_q == k[i]) {
      out.c = slice.v[i][n1 - 1];
      out.w = slice.v[i].head(n1 - 1);
      return out;
    }
  }
  const int m = bracket(k, k_q);
  const Eigen::VectorXd v = hermite(k[m], k[m + 1], slice.v[m], slice.vdot[m],
                                    slice.v[m + 1], slice.vdot[m + 1], k_q);
  out.c = v[n1 - 1];
  out.w = v.head(n1 - 1);
  return out;
}

FieldQuery PolarField::query(double k_q, double theta_q, bool want_w) const {
  if (k_q < k_.front() || k_q > k_.back())
    throw std::out_of_range("PolarField::query: k outside radius span");

  double th = theta_q;
  if (periodic_) {
    th = std::fmod(th - theta_.front(), kTwoPi);
    if (th < 0.0) th += kTwoPi;
    th += theta_.front();
  } else if (th < theta_.front() || th > theta_.back()) {
    throw std::out_of_range("PolarField::query: theta outside angular span");
  }

  // At an angle knot the interpolation degenerates to the slice itself.
  for (size_t j = 0; j < theta_.size(); ++j) {
    if (th == theta_[j]) {
      const SliceEval e = eval_slice(k_, slices_[j], k_q);
      FieldQuery q;
      q.c = e.c;
      if (want_w) q.w = e.w;
      return q;
    }
  }

  int l, lp;
  double th_lo, th_hi;
  if (periodic_ && th > theta_.back()) {
    l = static_cast<int>(theta_.size()) - 1;
    lp = 0;
    th_lo = theta_.back();
    th_hi = theta_.front() + kTwoPi;
  } else {
    l = bracket(theta_, th);
    lp = l + 1;
    th_lo = theta_[static_cast<size_t>(l)];
    th_hi = theta_[static_cast<size_t>(lp)];
  }

  const SliceEval e0 = eval_slice(k_, slices_[static_cast<size_t>(l)], k_q);
  const SliceEval e1 = eval_slice(k_, slices_[static_cast<size_t>(lp)], k_q);

  // Fresh angular derivatives at both ends from the continuation system,
  // assembled from the cached node samples rotated to the slice angle.
  const auto tangent_at = [&](double theta_s, const SliceEval& e) {
    const Eigen::VectorXd wn = e.w / e.w.norm();
    const pathfollow::BlockSystem bs = pathfollow::assemble_angular(
        shear::project(samples_, theta_s),
        shear::angular_derivative(samples_, theta_s), profile_.froude_sq, op_,
        k_q, e.c, wn);
    return pathfollow::derivative(bs, theta_s);
  };
  const pathfollow::Tangent t0 =
      tangent_at(theta_[static_cast<size_t>(l)], e0);
  const pathfollow::Tangent t1 =
      tangent_at(theta_[static_cast<size_t>(lp)], e1);

  FieldQuery q;
  q.c = hermite(th_lo, th_hi, e0.c, t0.cdot, e1.c, t1.cdot, th);
  if (want_w) {
    const Eigen::VectorXd w0 = e0.w / e0.w.norm();
    const Eigen::VectorXd w1 = e1.w / e1.w.norm();
    q.w = hermite(th_lo, th_hi, w0, t0.wdot, w1, t1.wdot, th);
  }
  return q;
}

double PolarField::query_c(double k_q, double theta_q) const {
  return query(k_q, theta_q, false).c;
}

PolarField build_field(const shear::ShearProfile& profile2d,
                       const spectral::CollocationOperator& op,
                       const std::vector<double>& k_knots,
                       const std::vector<double>& theta_knots, double k0,
                       const pathfollow::PathOptions& opts, int jobs) {
  check_knots(k_knots, "build_field k");
  check_knots(theta_knots, "build_field theta");
  if (k0 < k_knots.front() || k0 > k_knots.back())
    throw std::invalid_argument("build_field: k0 outside radius span");

  PolarField f;
  f.profile_ = profile2d;
  f.op_ = op;
  f.samples_ = shear::sample(profile2d, op);
  f.k_ = k_knots;
  f.theta_ = theta_knots;
  f.k0_ = k0;
  f.tol_ = opts.tol;

  const double span = theta_knots.back() - theta_knots.front();
  double max_gap = 0.0;
  for (size_t j = 1; j < theta_knots.size(); ++j)
    max_gap = std::max(max_gap, theta_knots[j] - theta_knots[j - 1]);
  f.periodic_ = span < kTwoPi && (kTwoPi - span) <= 1.5 * max_gap;

  const pathfollow::PathSolution angular = pathfollow::pf_angular(
      profile2d, op, k0, theta_knots.front(), theta_knots.back(),
      theta_knots.front(), opts);

  const int nj = static_cast<int>(theta_knots.size());
  f.slices_.resize(static_cast<size_t>(nj));
  std::vector<std::string> failures(static_cast<size_t>(nj));

  const auto build_slice = [&](int j) {
    const double theta = theta_knots[static_cast<size_t>(j)];
    const pathfollow::DenseValue seed_v =
        pathfollow::dense_eval(angular, theta, true);
    collocation::EigenSolution seed;
    seed.k = k0;
    seed.c = seed_v.c;
    seed.w = (seed_v.w / seed_v.w.norm()).cast<std::complex<double>>();
    seed.normalized = true;

    const shear::ReducedProfile projected = shear::project(profile2d, theta);
    const pathfollow::PathSolution path = pathfollow::pf_radial(
        projected, op, k_knots.front(), k_knots.back(), k0, opts, seed);

    RadialSlice slice;
    slice.theta = theta;
    slice.v.reserve(k_knots.size());
    slice.vdot.reserve(k_knots.size());
    for (double ki : k_knots) {
      const pathfollow::DenseValue dv = pathfollow::dense_eval(path, ki, true);
      const Eigen::VectorXd wn = dv.w / dv.w.norm();
      Eigen::VectorXd v(wn.size() + 1);
      v << wn, dv.c;
      const pathfollow::BlockSystem bs =
          pathfollow::assemble_radial(projected, op, ki, dv.c, wn);
      const pathfollow::Tangent tan = pathfollow::derivative(bs, ki);
      Eigen::VectorXd vd(wn.size() + 1);
      vd << tan.wdot, tan.cdot;
      slice.v.push_back(std::move(v));
      slice.vdot.push_back(std::move(vd));
    }
    f.slices_[static_cast<size_t>(j)] = std::move(slice);
  };

  const auto worker = [&](int start, int stride) {
    for (int j = start; j < nj; j += stride) {
      try {
        build_slice(j);
      } catch (const std::exception& e) {
        failures[static_cast<size_t>(j)] = e.what();
      }
    }
  };

  if (jobs <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t, jobs);
    for (auto& th : pool) th.join();
  }

  std::ostringstream bad;
  double first_bad = 0.0;
  bool any_bad = false;
  for (int j = 0; j < nj; ++j) {
    if (failures[static_cast<size_t>(j)].empty()) continue;
    if (!any_bad) first_bad = theta_knots[static_cast<size_t>(j)];
    any_bad = true;
    bad << " theta=" << theta_knots[static_cast<size_t>(j)] << " ("
        << failures[static_cast<size_t>(j)] << ")";
  }
  if (any_bad)
    throw ContinuationBreakdownError("field build failed at angles:" + bad.str(),
                                     first_bad);
  return f;
}

std::string PolarField::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["profile"] = profile_.name;
  j["froude_sq"] = profile_.froude_sq;
  j["order"] = op_.order;
  j["depth"] = op_.depth;
  j["tol"] = tol_;
  j["k0"] = k0_;
  j["periodic"] = periodic_;
  j["k"] = k_;
  j["theta"] = theta_;
  j["slices"] = nlohmann::json::array();
  for (const auto& s : slices_) {
    nlohmann::json js;
    js["theta"] = s.theta;
    js["v"] = nlohmann::json::array();
    js["vdot"] = nlohmann::json::array();
    for (const auto& v : s.v)
      js["v"].push_back(std::vector<double>(v.data(), v.data() + v.size()));
    for (const auto& v : s.vdot)
      js["vdot"].push_back(std::vector<double>(v.data(), v.data() + v.size()));
    j["slices"].push_back(std::move(js));
  }
  return j.dump();
}

PolarField load_field(const std::string& json_text,
                      const shear::ShearProfile& profile2d) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.at("version").get<int>() != 1)
    throw std::invalid_argument("load_field: unsupported container version");
  if (j.at("profile").get<std::string>() != profile2d.name ||
      j.at("froude_sq").get<double>() != profile2d.froude_sq)
    throw InvalidSeedError("load_field: field provenance does not match profile");

  PolarField f;
  f.profile_ = profile2d;
  const int order = j.at("order").get<int>();
  const double depth = j.at("depth").get<double>();
  spectral::CollocationOperator base = spectral::make_operator(order);
  f.op_ = (depth == base.depth) ? base : spectral::map_operator(base, depth);
  f.samples_ = shear::sample(profile2d, f.op_);
  f.tol_ = j.at("tol").get<double>();
  f.k0_ = j.at("k0").get<double>();
  f.periodic_ = j.at("periodic").get<bool>();
  f.k_ = j.at("k").get<std::vector<double>>();
  f.theta_ = j.at("theta").get<std::vector<double>>();
  for (const auto& js : j.at("slices")) {
    RadialSlice s;
    s.theta = js.at("theta").get<double>();
    for (const auto& row : js.at("v")) {
      const auto vals = row.get<std::vector<double>>();
      s.v.push_back(Eigen::Map<const Eigen::VectorXd>(
          vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
    for (const auto& row : js.at("vdot")) {
      const auto vals = row.get<std::vector<double>>();
      s.vdot.push_back(Eigen::Map<const Eigen::VectorXd>(
          vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
    f.slices_.push_back(std::move(s));
  }
  if (f.slices_.size() != f.theta_.size())
    throw std::invalid_argument("load_field: slice count mismatch");
  return f;
}

}  // namespace wavedisp::grid
