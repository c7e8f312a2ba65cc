#include "wavedisp/linalg.hpp"

#include <cmath>

#include <lapacke.h>

#include "wavedisp/errors.hpp"

namespace wavedisp::linalg {

namespace {

// Joint power-of-2 row/column equilibration of the pencil (A, B). The scale
// factors are exact in binary floating point, so the eigenvalues of the
// scaled pencil are identical; without it the backward error of QZ is
// normwise over rows whose magnitudes differ by many orders (the
// differentiation blocks grow like N^4) and small-row eigendata is destroyed.
void equilibrate(Eigen::MatrixXd& a, Eigen::MatrixXd& b, Eigen::VectorXd& dr,
                 Eigen::VectorXd& dc) {
  const Eigen::Index n = a.rows();
  dr = Eigen::VectorXd::Ones(n);
  dc = Eigen::VectorXd::Ones(n);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = std::max(a.row(i).cwiseAbs().maxCoeff(),
                                b.row(i).cwiseAbs().maxCoeff());
      if (s <= 0.0) continue;
      const double f = std::exp2(-std::round(std::log2(s)));
      a.row(i) *= f;
      b.row(i) *= f;
      dr[i] *= f;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = std::max(a.col(j).cwiseAbs().maxCoeff(),
                                b.col(j).cwiseAbs().maxCoeff());
      if (s <= 0.0) continue;
      const double f = std::exp2(-std::round(std::log2(s)));
      a.col(j) *= f;
      b.col(j) *= f;
      dc[j] *= f;
    }
  }
}

}  // namespace

GeneralizedEigenResult generalized_eig(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b, bool want_left) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("generalized_eig: matrices must be square, same size");

  Eigen::MatrixXd ac = a, bc = b;  // dggev overwrites
  Eigen::VectorXd dr, dc;
  equilibrate(ac, bc, dr, dc);
  Eigen::VectorXd ar(n), ai(n), be(n);
  Eigen::MatrixXd vl(want_left ? n : 1, want_left ? n : 1);
  Eigen::MatrixXd vr(n, n);

  const lapack_int info = LAPACKE_dggev(
      LAPACK_COL_MAJOR, want_left ? 'V' : 'N', 'V', n, ac.data(), n, bc.data(), n,
      ar.data(), ai.data(), be.data(), vl.data(), want_left ? n : 1, vr.data(), n);
  if (info != 0)
    throw SolverError("dggev failed with info=" + std::to_string(info));

  GeneralizedEigenResult out;
  out.alpha.resize(n);
  out.beta = be;
  out.right_vectors.resize(n, n);
  if (want_left) out.left_vectors.resize(n, n);

  // Unpack LAPACK's compressed complex-conjugate-pair storage.
  for (lapack_int j = 0; j < n; ++j) {
    out.alpha[j] = {ar[j], ai[j]};
    if (ai[j] > 0.0 && j + 1 < n) {
      for (lapack_int i = 0; i < n; ++i) {
        out.right_vectors(i, j) = {vr(i, j), vr(i, j + 1)};
        out.right_vectors(i, j + 1) = {vr(i, j), -vr(i, j + 1)};
        if (want_left) {
          out.left_vectors(i, j) = {vl(i, j), vl(i, j + 1)};
          out.left_vectors(i, j + 1) = {vl(i, j), -vl(i, j + 1)};
        }
      }
      ++j;
      out.alpha[j] = {ar[j], ai[j]};
    } else if (ai[j] == 0.0) {
      for (lapack_int i = 0; i < n; ++i) {
        out.right_vectors(i, j) = vr(i, j);
        if (want_left) out.left_vectors(i, j) = vl(i, j);
      }
    }
  }

  // Undo the equilibration: right eigenvectors pick up the column scaling,
  // left eigenvectors the row scaling.
  for (lapack_int i = 0; i < n; ++i) {
    out.right_vectors.row(i) *= dc[i];
    if (want_left) out.left_vectors.row(i) *= dr[i];
  }
  return out;
}

}  // namespace wavedisp::linalg
