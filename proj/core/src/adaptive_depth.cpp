#include "wavedisp/adaptive_depth.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "wavedisp/errors.hpp"

namespace wavedisp::depth {

double h_delta(double k, double delta) {
  if (k <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("h_delta: need k > 0 and 0 < delta < 1");
  return std::min(1.0, -std::log(delta) / k);
}

DepthPlan build_plan(double delta, double c_min, double c_max, double k_max) {
  if (!(c_min > 0.0 && c_min < c_max && c_max < 1.0))
    throw std::invalid_argument("build_plan: need 0 < C_min < C_max < 1");
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("build_plan: need 0 < delta < 1");

  const double l = -std::log(delta);
  DepthPlan plan;
  plan.delta = delta;
  plan.c_min = c_min;
  plan.c_max = c_max;
  plan.intervals.push_back({0.0, l / c_max, 1.0});

  double cmin_pow = 1.0;  // C_min^{j-1}
  for (int j = 1; plan.intervals.back().k_hi < k_max; ++j) {
    const double lo = l / cmin_pow;
    const double hi = l / (cmin_pow * c_min * c_max);
    const double h = std::min(1.0, 0.5 * (cmin_pow + cmin_pow * c_min * c_max));
    plan.intervals.push_back({lo, hi, h});
    cmin_pow *= c_min;
    if (j > 200) throw std::invalid_argument("build_plan: k_max unreachable");
  }
  plan.intervals.back().k_hi = std::min(plan.intervals.back().k_hi, k_max);
  return plan;
}

std::string plan_to_json(const DepthPlan& plan) {
  nlohmann::json j;
  j["delta"] = plan.delta;
  j["C_min"] = plan.c_min;
  j["C_max"] = plan.c_max;
  j["intervals"] = nlohmann::json::array();
  for (const auto& iv : plan.intervals)
    j["intervals"].push_back({{"k_lo", iv.k_lo}, {"k_hi", iv.k_hi}, {"h", iv.h}});
  return j.dump(2);
}

namespace {

// C-infinity transition: 0 for s <= 0, 1 for s >= 1.
double ramp(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace

std::vector<Weight> pu_weights(const DepthPlan& plan, double k) {
  std::vector<Weight> raw;
  const int n = static_cast<int>(plan.intervals.size());
  for (int j = 0; j < n; ++j) {
    const auto& iv = plan.intervals[j];
    if (k < iv.k_lo || k > iv.k_hi) continue;
    double up = 1.0;
    if (j > 0) {
      const double a = iv.k_lo, b = plan.intervals[j - 1].k_hi;
      if (b > a) up = ramp((k - a) / (b - a));
    }
    double down = 1.0;
    if (j + 1 < n) {
      const double a = plan.intervals[j + 1].k_lo, b = iv.k_hi;
      if (b > a) down = 1.0 - ramp((k - a) / (b - a));
    }
    raw.push_back({j, up * down});
  }
  if (raw.empty()) throw std::out_of_range("pu_weights: k not covered by plan");
  double sum = 0.0;
  for (const auto& w : raw) sum += w.value;
  if (sum <= 0.0) {
    // Degenerate corner of a truncated overlap: fall back to the nearest.
    for (auto& w : raw) w.value = 1.0 / raw.size();
  } else {
    for (auto& w : raw) w.value /= sum;
  }
  return raw;
}

double pu_blend(const std::vector<pathfollow::PathSolution>& solutions,
                const DepthPlan& plan, double k_query) {
  const auto weights = pu_weights(plan, k_query);
  double c = 0.0;
  for (const auto& w : weights) {
    if (w.interval >= static_cast<int>(solutions.size()))
      throw std::out_of_range("pu_blend: missing solution for covering interval");
    c += w.value * pathfollow::dense_eval_c(solutions[w.interval], k_query);
  }
  return c;
}

namespace {

// Parameter span of a path in k, undoing a logarithmic parametrisation.
bool covers(const pathfollow::PathSolution& ps, double k) {
  const double lo = ps.log_param ? std::exp(ps.t_min()) : ps.t_min();
  const double hi = ps.log_param ? std::exp(ps.t_max()) : ps.t_max();
  const double slack = 1e-12 * std::max(1.0, hi);
  return k >= lo - slack && k <= hi + slack;
}

}  // namespace

double AdaptiveDispersion::eval(double k) const {
  // Absorb rounding overshoot from log-spaced query generation.
  const double slack = 1e-12 * std::max(1.0, k_hi_);
  if (k < k_lo_ - slack || k > k_hi_ + slack)
    throw std::out_of_range("AdaptiveDispersion: k outside range");
  k = std::clamp(k, k_lo_, k_hi_);
  auto weights = pu_weights(plan_, k);
  double c = 0.0, wsum = 0.0;
  for (const auto& w : weights) {
    int path = -1;
    for (size_t i = 0; i < plan_index_.size(); ++i)
      if (plan_index_[i] == w.interval) path = static_cast<int>(i);
    if (path < 0) continue;
    const auto& ps = paths_[static_cast<size_t>(path)];
    if (!covers(ps, k)) continue;
    c += w.value * pathfollow::dense_eval_c(ps, k);
    wsum += w.value;
  }
  if (wsum == 0.0) throw std::out_of_range("AdaptiveDispersion: k not covered");
  return c / wsum;
}

Eigen::VectorXd AdaptiveDispersion::eigenfunction(
    double k, const Eigen::VectorXd& z_points) const {
  const auto weights = pu_weights(plan_, k);
  int best_path = -1;
  double best_w = -1.0;
  for (const auto& w : weights) {
    for (size_t i = 0; i < plan_index_.size(); ++i) {
      if (plan_index_[i] != w.interval) continue;
      const auto& ps = paths_[i];
      if (!covers(ps, k)) continue;
      if (w.value > best_w) {
        best_w = w.value;
        best_path = static_cast<int>(i);
      }
    }
  }
  if (best_path < 0) throw std::out_of_range("eigenfunction: k not covered");

  const auto& op = ops_[static_cast<size_t>(best_path)];
  const auto dv =
      pathfollow::dense_eval(paths_[static_cast<size_t>(best_path)], k, true);
  Eigen::VectorXd w_full = Eigen::VectorXd::Zero(op.nodes.size());
  w_full.head(dv.w.size()) = dv.w;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(z_points.size());
  std::vector<Eigen::Index> inside;
  for (Eigen::Index i = 0; i < z_points.size(); ++i)
    if (z_points[i] >= -op.depth) inside.push_back(i);
  Eigen::VectorXd zq(static_cast<Eigen::Index>(inside.size()));
  for (size_t i = 0; i < inside.size(); ++i) zq[static_cast<Eigen::Index>(i)] = z_points[inside[i]];
  const Eigen::VectorXd vals = spectral::barycentric_eval(op.nodes, w_full, zq);
  for (size_t i = 0; i < inside.size(); ++i) out[inside[i]] = vals[static_cast<Eigen::Index>(i)];
  return out;
}

AdaptiveDispersion pf_radial_adaptive(const shear::ReducedProfile& profile,
                                      double k_min, double k_max,
                                      const pathfollow::PathOptions& opts,
                                      double delta, double c_min, double c_max,
                                      int order) {
  if (k_min <= 0.0 || k_max <= k_min)
    throw std::invalid_argument("pf_radial_adaptive: need 0 < k_min < k_max");

  AdaptiveDispersion out;
  out.plan_ = build_plan(delta, c_min, c_max, k_max);
  out.k_lo_ = k_min;
  out.k_hi_ = k_max;

  const spectral::CollocationOperator base = spectral::make_operator(order);
  for (int j = 0; j < static_cast<int>(out.plan_.intervals.size()); ++j) {
    const auto& iv = out.plan_.intervals[j];
    const double a = std::max(iv.k_lo, k_min);
    const double b = std::min(iv.k_hi, k_max);
    if (b <= a) continue;
    const spectral::CollocationOperator op = spectral::map_operator(base, iv.h);
    const double k_seed = std::clamp(std::sqrt(std::max(a, 1e-12) * b), a, b);
    out.paths_.push_back(pathfollow::pf_radial(profile, op, a, b, k_seed, opts));
    out.ops_.push_back(op);
    out.plan_index_.push_back(j);
  }
  if (out.paths_.empty())
    throw std::invalid_argument("pf_radial_adaptive: empty plan coverage");
  return out;
}

}  // namespace wavedisp::depth
