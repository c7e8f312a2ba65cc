#include "wavedisp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace wavedisp::spectral {

namespace {

// Barycentric weights for arbitrary distinct nodes, computed in log space to
// avoid under/overflow, normalised so that max |w| = 1 (the normalisation
// cancels in every formula that uses them).
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd logw(n);
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    double sg = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = x[i] - x[j];
      if (d == 0.0) throw std::invalid_argument("duplicate interpolation nodes");
      s -= std::log(std::abs(d));
      if (d < 0.0) sg = -sg;
    }
    logw[i] = s;
    sign[i] = sg;
  }
  const double shift = logw.maxCoeff();
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = sign[i] * std::exp(logw[i] - shift);
  return w;
}

// Negative sum trick: diagonal = -(sum of off-diagonal row entries), summed
// in order of increasing magnitude.
void apply_negative_sum_trick(Eigen::MatrixXd& d) {
  const Eigen::Index n = d.rows();
  std::vector<double> row;
  row.reserve(static_cast<size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row.push_back(d(i, j));
    std::sort(row.begin(), row.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double s = 0.0;
    for (double v : row) s += v;
    d(i, i) = -s;
  }
}

}  // namespace

Eigen::VectorXd cgl_points(int order) {
  if (order < 1) throw std::invalid_argument("cgl_points: order must be >= 1");
  Eigen::VectorXd z(order + 1);
  for (int j = 0; j <= order; ++j) z[j] = std::cos(j * M_PI / order);
  z[0] = 1.0;
  z[order] = -1.0;
  if (order % 2 == 0) z[order / 2] = 0.0;
  return z;
}

DiffMatrices diff_matrices(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  if (n < 2) throw std::invalid_argument("diff_matrices: need at least 2 nodes");
  const Eigen::VectorXd w = barycentric_weights(nodes);

  DiffMatrices out;
  out.d1 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) out.d1(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
  apply_negative_sum_trick(out.d1);

  // Welfert recursion for the second derivative.
  out.d2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j)
        out.d2(i, j) =
            2.0 / (nodes[i] - nodes[j]) * ((w[j] / w[i]) * out.d1(i, i) - out.d1(i, j));
  apply_negative_sum_trick(out.d2);
  return out;
}

CollocationOperator make_operator(int order) {
  CollocationOperator op;
  op.order = order;
  op.depth = 2.0;
  op.nodes = cgl_points(order);
  DiffMatrices d = diff_matrices(op.nodes);
  op.d1 = std::move(d.d1);
  op.d2 = std::move(d.d2);
  return op;
}

CollocationOperator map_operator(const CollocationOperator& op, double h) {
  if (h <= 0.0) throw std::invalid_argument("map_operator: depth must be positive");
  CollocationOperator m;
  m.order = op.order;
  m.depth = h;
  // Recover the unit-interval nodes, then apply z = (h/2)(zeta - 1).
  Eigen::VectorXd zeta;
  if (op.depth == 2.0) {
    zeta = op.nodes;
  } else {
    zeta = (2.0 / op.depth) * op.nodes;
    zeta.array() += 1.0;
  }
  m.nodes = (h / 2.0) * (zeta.array() - 1.0);
  const double s1 = op.depth / h;  // composition of the two chain-rule factors
  m.d1 = op.d1 * s1;
  m.d2 = op.d2 * (s1 * s1);
  return m;
}

template <typename Vec>
static Vec barycentric_eval_impl(const Eigen::VectorXd& nodes, const Vec& values,
                                 const Eigen::VectorXd& queries) {
  if (nodes.size() != values.size())
    throw std::invalid_argument("barycentric_eval: nodes/values size mismatch");
  const Eigen::VectorXd w = barycentric_weights(nodes);
  Vec out(queries.size());
  for (Eigen::Index q = 0; q < queries.size(); ++q) {
    const double xq = queries[q];
    typename Vec::Scalar num{};
    double den = 0.0;
    bool hit = false;
    for (Eigen::Index j = 0; j < nodes.size(); ++j) {
      const double d = xq - nodes[j];
      if (d == 0.0) {
        out[q] = values[j];
        hit = true;
        break;
      }
      const double t = w[j] / d;
      num += t * values[j];
      den += t;
    }
    if (!hit) out[q] = num / den;
  }
  return out;
}

Eigen::VectorXd barycentric_eval(const Eigen::VectorXd& nodes,
                                 const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& queries) {
  return barycentric_eval_impl(nodes, values, queries);
}

Eigen::VectorXcd barycentric_eval(const Eigen::VectorXd& nodes,
                                  const Eigen::VectorXcd& values,
                                  const Eigen::VectorXd& queries) {
  return barycentric_eval_impl(nodes, values, queries);
}

Eigen::VectorXd cheb_coefficients(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 1) return values;
  Eigen::VectorXd a(n + 1);
  for (int m = 0; m <= n; ++m) {
    double s = 0.5 * (values[0] + (m % 2 == 0 ? values[n] : -values[n]));
    for (int j = 1; j < n; ++j) s += values[j] * std::cos(m * j * M_PI / n);
    a[m] = 2.0 * s / n;
  }
  a[0] *= 0.5;
  a[n] *= 0.5;
  return a;
}

ConvergenceReport series_convergence(const Eigen::VectorXd& coefficients,
                                     double noise_floor_quantile, int bins) {
  const Eigen::Index n = coefficients.size();
  if (n == 0) throw std::invalid_argument("series_convergence: empty coefficient vector");

  // Monotone (non-increasing) envelope of |a_j|.
  Eigen::VectorXd env(n);
  double running = 0.0;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    running = std::max(running, std::abs(coefficients[j]));
    env[j] = running;
  }
  if (env[0] == 0.0) return {true, 0, 0.0};

  // Log-magnitudes; exact zeros are pinned one bin below the smallest
  // positive envelope value.
  double minpos = env[0];
  for (Eigen::Index j = 0; j < n; ++j)
    if (env[j] > 0.0) minpos = std::min(minpos, env[j]);
  std::vector<double> logs(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    logs[static_cast<size_t>(j)] =
        env[j] > 0.0 ? std::log10(env[j]) : std::log10(minpos) - 1.0;

  const double lo = *std::min_element(logs.begin(), logs.end());
  const double hi = *std::max_element(logs.begin(), logs.end());
  if (hi - lo < 1e-12) return {false, 0, 0.0};  // flat sequence, no decay

  // Split point on the log-magnitude range: everything above is treated as
  // the decaying head. A quantile of the empirical distribution would slide
  // into the plateau once it holds the majority of the coefficients.
  const double cut = lo + noise_floor_quantile * (hi - lo);

  const double width = (hi - lo) / bins;
  std::vector<int> count(static_cast<size_t>(bins), 0);
  for (double lg : logs) {
    int b = std::min(bins - 1, static_cast<int>((lg - lo) / width));
    ++count[static_cast<size_t>(b)];
  }

  // Typical decay-bin occupancy, estimated from the bins above the quantile
  // cut (the clearly decaying head of the sequence).
  std::vector<int> head_counts;
  for (int b = 0; b < bins; ++b) {
    if (lo + (b + 1) * width < cut) continue;
    if (count[static_cast<size_t>(b)] == 0) continue;
    head_counts.push_back(count[static_cast<size_t>(b)]);
  }
  if (head_counts.empty()) return {false, 0, 0.0};
  std::sort(head_counts.begin(), head_counts.end());
  const int median_count = head_counts[head_counts.size() / 2];

  // Plateau bins must individually dominate the typical decay bin; a purely
  // decaying sequence fills all bins evenly and produces none.
  std::vector<bool> plateau(static_cast<size_t>(bins), false);
  int best = -1;
  for (int b = 0; b < bins; ++b) {
    if (lo + (b + 1) * width >= cut) continue;
    if (count[static_cast<size_t>(b)] < 2 * median_count) continue;
    plateau[static_cast<size_t>(b)] = true;
    if (best < 0 || count[static_cast<size_t>(b)] > count[static_cast<size_t>(best)])
      best = b;
  }
  if (best < 0 || count[static_cast<size_t>(best)] < std::max(4, 2 * median_count))
    return {false, 0, 0.0};

  // Extend to the contiguous run of dominating bins around the best one.
  int run_hi = best;
  while (run_hi + 1 < bins && plateau[static_cast<size_t>(run_hi + 1)]) ++run_hi;

  const double threshold = std::pow(10.0, lo + (run_hi + 1) * width);
  int required = 0;
  while (required < n && env[required] > threshold) ++required;
  return {true, required, threshold};
}

}  // namespace wavedisp::spectral
