#include "wavedisp/collocation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavedisp/errors.hpp"
#include "wavedisp/linalg.hpp"

namespace wavedisp::collocation {

namespace {

// Free-surface boundary row for phase velocity c:
// (u0 - c)^2 d_f - [((u0 - c) u0' + F^-2), 0, ..., 0].
Eigen::RowVectorXd surface_row(const Eigen::RowVectorXd& df, double u0, double du0,
                               double froude_sq, double c) {
  Eigen::RowVectorXd f = (u0 - c) * (u0 - c) * df;
  f[0] -= (u0 - c) * du0 + 1.0 / froude_sq;
  return f;
}

}  // namespace

Eigen::VectorXd EigenSolution::real_eigenvector(double tol) const {
  if (w.imag().cwiseAbs().maxCoeff() > tol * w.norm())
    throw NumericalError("eigenvector has non-negligible imaginary part");
  return w.real();
}

Eigen::VectorXcd normalize_eigenvector(const Eigen::VectorXcd& w) {
  Eigen::VectorXcd out = w / w.norm();
  std::complex<double> s = out[0];
  if (std::abs(s) > 0.0) out *= std::conj(s) / std::abs(s);
  if (out[0].real() < 0.0) out = -out;
  return out;
}

GeneralizedPencil assemble_backward(const shear::ReducedProfile& profile,
                                    const spectral::CollocationOperator& op, double c) {
  const int n = op.order;  // system size after bottom elimination
  const shear::SampledShear s = sample(profile, op);

  // Reject c inside the essential range: q_j = u''_j / (u_j - c) is singular
  // there and the discrete problem is meaningless.
  const shear::EssentialRange range = essential_range(profile, 512);
  if (c >= range.lo && c <= range.hi) {
    double zbad = op.nodes[0];
    double best = std::numeric_limits<double>::max();
    for (int j = 0; j <= n; ++j) {
      const double d = std::abs(s.u[j] - c);
      if (d < best) {
        best = d;
        zbad = op.nodes[j];
      }
    }
    throw CriticalLayerError("phase velocity lies in the essential range", zbad);
  }

  GeneralizedPencil p;
  p.c = c;
  p.a.resize(n, n);
  p.a.row(0) = surface_row(op.d1.row(0).head(n), s.u[0], s.du[0], profile.froude_sq, c);
  for (int i = 1; i < n; ++i) {
    p.a.row(i) = op.d2.row(i).head(n);
    p.a(i, i) -= s.ddu[i] / (s.u[i] - c);
  }
  p.b = Eigen::MatrixXd::Identity(n, n);
  p.b(0, 0) = 0.0;
  return p;
}

EigenSolution solve_backward(const shear::ReducedProfile& profile,
                             const spectral::CollocationOperator& op, double c,
                             const SolveOptions& opts) {
  const GeneralizedPencil p = assemble_backward(profile, op, c);
  const linalg::GeneralizedEigenResult eig = linalg::generalized_eig(p.a, p.b);

  int best = -1;
  double mu_best = 0.0;
  for (Eigen::Index j = 0; j < eig.alpha.size(); ++j) {
    if (eig.beta[j] == 0.0) continue;
    const std::complex<double> mu = eig.alpha[j] / eig.beta[j];
    if (!std::isfinite(mu.real()) || std::abs(mu) >= opts.magnitude_cutoff) continue;
    if (std::abs(mu.imag()) > opts.imag_tol * std::abs(mu)) continue;
    if (mu.real() > 0.0 && mu.real() > mu_best) {
      mu_best = mu.real();
      best = static_cast<int>(j);
    }
  }
  if (best < 0)
    throw NoPropagatingModeError("no positive eigenvalue mu found at c=" +
                                 std::to_string(c));
  EigenSolution sol;
  sol.k = std::sqrt(mu_best);
  sol.c = c;
  sol.w = normalize_eigenvector(eig.right_vectors.col(best));
  sol.normalized = true;
  return sol;
}

QuadraticPencil assemble_forward(const shear::ReducedProfile& profile,
                                 const spectral::CollocationOperator& op, double k) {
  if (k <= 0.0) throw std::invalid_argument("assemble_forward: k must be positive");
  const int n = op.order;
  const shear::SampledShear s = sample(profile, op);
  const Eigen::RowVectorXd df = op.d1.row(0).head(n);
  const double u0 = s.u[0], du0 = s.du[0];
  const double finv2 = 1.0 / profile.froude_sq;

  QuadraticPencil p;
  p.k = k;
  p.a2 = Eigen::MatrixXd::Zero(n, n);
  p.a1 = Eigen::MatrixXd::Zero(n, n);
  p.a0 = Eigen::MatrixXd::Zero(n, n);

  p.a2.row(0) = df;
  p.a1.row(0) = -2.0 * u0 * df;
  p.a1(0, 0) += du0;
  p.a0.row(0) = u0 * u0 * df;
  p.a0(0, 0) -= du0 * u0 + finv2;

  // Interior rows: R1 = -(D2 - k^2 I), R0 = U (D2 - k^2 I) - U''.
  for (int i = 1; i < n; ++i) {
    Eigen::RowVectorXd lrow = op.d2.row(i).head(n);
    lrow[i] -= k * k;
    p.a1.row(i) = -lrow;
    p.a0.row(i) = s.u[i] * lrow;
    p.a0(i, i) -= s.ddu[i];
  }
  return p;
}

std::vector<QuadraticEigenPair> solve_quadratic(const QuadraticPencil& pencil) {
  const Eigen::Index n = pencil.a0.rows();
  // First companion form: [-A1 -A0; I 0] x = c [A2 0; 0 I] x, x = [c w; w].
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  l.topLeftCorner(n, n) = -pencil.a1;
  l.topRightCorner(n, n) = -pencil.a0;
  l.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  m.topLeftCorner(n, n) = pencil.a2;
  m.bottomRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);

  const linalg::GeneralizedEigenResult eig = linalg::generalized_eig(l, m);
  std::vector<QuadraticEigenPair> out;
  out.reserve(static_cast<size_t>(2 * n));
  for (Eigen::Index j = 0; j < eig.alpha.size(); ++j) {
    if (eig.beta[j] == 0.0) continue;
    const std::complex<double> c = eig.alpha[j] / eig.beta[j];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) continue;
    out.push_back({c, eig.right_vectors.col(j).tail(n)});
  }
  return out;
}

EigenSolution select_branch(const std::vector<QuadraticEigenPair>& pairs,
                            const shear::EssentialRange& essential, double k,
                            const SolveOptions& opts) {
  if (pairs.empty()) throw NoPropagatingModeError("empty eigenpair list");
  int best = -1;
  double c_best = -std::numeric_limits<double>::max();
  for (size_t i = 0; i < pairs.size(); ++i) {
    const std::complex<double> c = pairs[i].c;
    if (std::abs(c) >= opts.magnitude_cutoff) continue;
    if (std::abs(c.imag()) > opts.imag_tol * std::abs(c)) continue;
    if (c.real() > c_best) {
      c_best = c.real();
      best = static_cast<int>(i);
    }
  }
  if (best < 0)
    throw NoPropagatingModeError("no finite real eigenvalue after filtering");

  EigenSolution sol;
  sol.k = k;
  sol.c = c_best;
  sol.w = normalize_eigenvector(pairs[static_cast<size_t>(best)].w);
  sol.normalized = true;
  sol.essential_gap = c_best - essential.hi;
  sol.critical_layer_warning = (c_best >= essential.lo && c_best <= essential.hi);
  sol.near_essential_warning = !sol.critical_layer_warning && sol.essential_gap < 1e-6;
  return sol;
}

EigenSolution solve_forward(const shear::ReducedProfile& profile,
                            const spectral::CollocationOperator& op, double k,
                            const SolveOptions& opts) {
  const QuadraticPencil pencil = assemble_forward(profile, op, k);
  const auto pairs = solve_quadratic(pencil);
  const shear::EssentialRange range = essential_range(profile, opts.essential_samples);
  return select_branch(pairs, range, k, opts);
}

FlowField reconstruct_flow(const shear::ShearProfile& profile, double kx, double ky,
                           const EigenSolution& solution,
                           const spectral::CollocationOperator& op) {
  const double k = std::hypot(kx, ky);
  if (std::abs(k - solution.k) > 1e-9 * std::max(1.0, solution.k))
    throw std::invalid_argument("reconstruct_flow: |k_vector| != solution.k");

  const Eigen::Index np = op.nodes.size();  // N_z + 1
  const double omega = solution.k * solution.c;
  const std::complex<double> im(0.0, 1.0);

  Eigen::VectorXcd w_full = Eigen::VectorXcd::Zero(np);
  w_full.head(np - 1) = solution.w;
  Eigen::VectorXcd dw = op.d1 * w_full;

  FlowField f;
  f.w = w_full;
  f.dw = dw;
  f.u.resize(np);
  f.v.resize(np);
  f.p.resize(np);
  for (Eigen::Index j = 0; j < np; ++j) {
    const double z = op.nodes[j];
    const double ku = kx * profile.ux(z) + ky * profile.uy(z);
    const double kdu = kx * profile.dux(z) + ky * profile.duy(z);
    const double dux = profile.dux(z), duy = profile.duy(z);
    const double det = omega - ku;
    if (std::abs(det) < 1e-14 * std::max(1.0, std::abs(omega)))
      throw CriticalLayerError("omega - k.U vanishes on the grid", z);
    const std::complex<double> common = kdu * w_full[j] - (ku - omega) * dw[j];
    f.p[j] = ((ku - omega) * dw[j] - kdu * w_full[j]) / (im * k * k);
    f.u[j] = (im * kx * common - im * k * k * dux * w_full[j]) / (k * k * det);
    f.v[j] = (im * ky * common - im * k * k * duy * w_full[j]) / (k * k * det);
  }
  return f;
}

}  // namespace wavedisp::collocation
