#pragma once

// Dense linear-algebra kernels with deterministic conventions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "noisy_mds/error.hpp"

namespace noisy_mds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Square symmetric matrices (dissimilarities, Gram matrices, variances) are
// carried as plain dense matrices; check_symmetric() validates on entry.
using SymmetricMatrix = Matrix;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// Largest |m(i,j) - m(j,i)| and where it occurs.
struct AsymmetryReport {
  double max_abs = 0.0;
  int row = -1;
  int col = -1;
};

inline AsymmetryReport asymmetry(const Matrix& m) {
  AsymmetryReport r;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      const double d = std::abs(m(i, j) - m(j, i));
      if (d > r.max_abs) {
        r = {d, static_cast<int>(i), static_cast<int>(j)};
      }
    }
  return r;
}

inline void check_symmetric(const Matrix& m, double tol = 0.0) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::Dimension, "matrix is not square");
  if (!m.allFinite()) throw Error(ErrorKind::DataFormat, "matrix has non-finite entries");
  const auto a = asymmetry(m);
  if (a.max_abs > tol) {
    std::ostringstream os;
    os << "matrix is not symmetric: |m(" << a.row << "," << a.col << ") - m(" << a.col << ","
       << a.row << ")| = " << a.max_abs;
    throw Error(ErrorKind::DataFormat, os.str());
  }
}

struct CenteredRows {
  Matrix centered;
  RowVector mean;
};

// Subtracts the column means. centered + 1*mean == input.
inline CenteredRows center_rows(const Matrix& config) {
  if (config.rows() == 0 || config.cols() == 0)
    throw Error(ErrorKind::Dimension, "center_rows: empty matrix");
  CenteredRows out;
  out.mean = config.colwise().mean();
  out.centered = config.rowwise() - out.mean;
  return out;
}

// -1/2 * H * D * H with H = I - 11'/n, computed from row/column means in O(n^2).
inline SymmetricMatrix double_center(const SymmetricMatrix& d) {
  const Eigen::Index n = d.rows();
  if (n < 2 || d.cols() != n) throw Error(ErrorKind::Dimension, "double_center: need a square matrix with n >= 2");
  const Vector row_mean = d.rowwise().mean();
  const RowVector col_mean = d.colwise().mean();
  const double grand = row_mean.mean();
  Matrix b(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      b(i, j) = -0.5 * (d(i, j) - row_mean(i) - col_mean(j) + grand);
  return b;
}

// Flips each column so its largest-magnitude entry is nonnegative
// (ties broken by the lowest row index).
inline void apply_sign_convention(Matrix& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, k));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (vectors(best, k) < 0.0) vectors.col(k) *= -1.0;
  }
}

struct SpectralPair {
  Vector values;   // descending
  Matrix vectors;  // n x p, orthonormal columns
  // min_k (lambda_k - lambda_{k+1}) / |lambda_1| over k = 1..p, using an
  // estimate of lambda_{p+1}. Infinity when p == n.
  double min_relative_gap = std::numeric_limits<double>::infinity();
  bool used_dense = true;
  int krylov_dim = 0;
  std::vector<Warning> warnings;
};

struct EigenOptions {
  // Problems of this order or smaller always go to the dense solver.
  Eigen::Index dense_threshold = 64;
  // Extra block columns beyond p; bounds the multiplicity the Krylov
  // iteration resolves to p + extra_block.
  int extra_block = 3;
  // Residual tolerance relative to |lambda_1|.
  double tolerance = 1e-12;
  // Relative gap below which a near-degenerate warning is emitted.
  double gap_warning = 1e-8;
  // Krylov basis larger than this fraction of n falls back to dense.
  double max_basis_fraction = 0.5;
  std::uint64_t start_seed = 0x5eed5eedULL;
  // Optional n x k guess for the leading subspace; fills the first k columns
  // of the Krylov start block, the rest stay random.
  Matrix warm_start;
};

namespace detail {

inline double gap_of(const Vector& top, double next, double scale) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 < top.size(); ++k) g = std::min(g, top(k) - top(k + 1));
  if (std::isfinite(next)) g = std::min(g, top(top.size() - 1) - next);
  return scale > 0 ? g / scale : g;
}

inline SpectralPair dense_top_eigs(const SymmetricMatrix& b, int p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::NonConvergence, "symmetric eigensolver did not converge");
  const Eigen::Index n = b.rows();
  SpectralPair out;
  out.values.resize(p);
  out.vectors.resize(n, p);
  for (int k = 0; k < p; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  const double next = p < n ? es.eigenvalues()(n - 1 - p) : std::numeric_limits<double>::quiet_NaN();
  out.min_relative_gap = gap_of(out.values, next, std::abs(out.values(0)));
  out.used_dense = true;
  return out;
}

// Orthonormalizes `block` against `basis` (two passes of classical
// Gram-Schmidt) and then internally. Returns false on rank loss.
inline bool orthonormalize_block(const Matrix& basis, Matrix& block) {
  for (int pass = 0; pass < 2; ++pass) {
    if (basis.cols() > 0) block -= basis * (basis.transpose() * block);
  }
  const double before = block.norm();
  Eigen::HouseholderQR<Matrix> qr(block);
  const Matrix r = qr.matrixQR().topRows(block.cols()).triangularView<Eigen::Upper>();
  const double floor = 1e-10 * std::max(before, 1e-300);
  for (Eigen::Index k = 0; k < r.cols(); ++k)
    if (std::abs(r(k, k)) <= floor) return false;
  block = qr.householderQ() * Matrix::Identity(block.rows(), block.cols());
  if (basis.cols() > 0) block -= basis * (basis.transpose() * block);
  return true;
}

// Block Krylov subspace with full reorthogonalization and Rayleigh-Ritz
// extraction of the algebraically largest pairs. Returns false when the
// basis budget is exhausted or the Krylov space breaks down; the caller then
// uses the dense solver.
inline bool krylov_top_eigs(const SymmetricMatrix& b, int p, const EigenOptions& opt, SpectralPair& out) {
  const Eigen::Index n = b.rows();
  const Eigen::Index block = std::min<Eigen::Index>(n, p + std::max(opt.extra_block, 1));
  const auto max_basis = static_cast<Eigen::Index>(opt.max_basis_fraction * static_cast<double>(n));

  std::mt19937_64 gen(opt.start_seed);
  std::normal_distribution<double> normal;
  Matrix start(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) start(i, j) = normal(gen);
  if (opt.warm_start.rows() == n && opt.warm_start.cols() > 0) {
    const Eigen::Index k = std::min(block, opt.warm_start.cols());
    start.leftCols(k) = opt.warm_start.leftCols(k);
  }

  Matrix basis(n, 0);
  Matrix image(n, 0);      // b * basis
  Matrix projected(0, 0);  // basis' * b * basis, grown block by block
  Matrix next = std::move(start);
  if (!orthonormalize_block(basis, next)) return false;

  int step = 0;
  while (basis.cols() + next.cols() <= max_basis) {
    const Eigen::Index m0 = basis.cols();
    const Eigen::Index m = m0 + block;
    basis.conservativeResize(n, m);
    basis.rightCols(block) = next;
    image.conservativeResize(n, m);
    // Column-wise products avoid repacking b for every skinny block.
    for (Eigen::Index j = 0; j < block; ++j) image.col(m0 + j).noalias() = b * next.col(j);

    const Matrix cross = basis.transpose() * image.rightCols(block);  // m x block
    projected.conservativeResize(m, m);
    projected.rightCols(block) = cross;
    projected.bottomLeftCorner(block, m0) = cross.topRows(m0).transpose();
    projected.bottomRightCorner(block, block) =
        0.5 * (cross.bottomRows(block) + cross.bottomRows(block).transpose());

    const bool last = m + block > max_basis;
    if (m >= p + 1 && (++step % 2 == 0 || last)) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(projected);
      if (es.info() != Eigen::Success) return false;
      const Eigen::Index want = std::min<Eigen::Index>(p + 1, m);
      Matrix y(m, want);
      Vector theta(want);
      for (Eigen::Index k = 0; k < want; ++k) {
        theta(k) = es.eigenvalues()(m - 1 - k);
        y.col(k) = es.eigenvectors().col(m - 1 - k);
      }
      const Matrix ritz = basis * y;
      const Matrix resid = image * y - ritz * theta.asDiagonal();
      const double scale = std::max(std::abs(theta(0)), std::numeric_limits<double>::min());
      bool converged = true;
      for (int k = 0; k < p; ++k)
        if (resid.col(k).norm() > opt.tolerance * scale) converged = false;
      if (converged) {
        out.values = theta.head(p);
        out.vectors = ritz.leftCols(p);
        double next_est = std::numeric_limits<double>::quiet_NaN();
        if (want > p) next_est = theta(p) + resid.col(p).norm();
        out.min_relative_gap = gap_of(out.values, next_est, scale);
        out.used_dense = false;
        out.krylov_dim = static_cast<int>(m);
        return true;
      }
    }
    next = image.rightCols(block);
    if (!orthonormalize_block(basis, next)) return false;
  }
  return false;
}

}  // namespace detail

// The p algebraically largest eigenpairs of a symmetric matrix, descending,
// with the sign convention applied. Small problems use a dense solver; larger
// ones a block Krylov iteration with dense fallback.
inline SpectralPair top_p_eigs(const SymmetricMatrix& b, int p, const EigenOptions& opt = {}) {
  const Eigen::Index n = b.rows();
  if (b.cols() != n) throw Error(ErrorKind::Dimension, "top_p_eigs: matrix is not square");
  if (p < 1 || p >= n) throw Error(ErrorKind::Dimension, "top_p_eigs: need 1 <= p < n");
  if (!b.allFinite()) throw Error(ErrorKind::DataFormat, "top_p_eigs: non-finite entries");

  SpectralPair out;
  bool done = false;
  if (n > opt.dense_threshold) done = detail::krylov_top_eigs(b, p, opt, out);
  if (!done) out = detail::dense_top_eigs(b, p);
  apply_sign_convention(out.vectors);
  if (out.min_relative_gap < opt.gap_warning) {
    std::ostringstream os;
    os << "near-degenerate spectrum: minimum relative eigen-gap " << out.min_relative_gap;
    out.warnings.push_back({"near_degenerate_spectrum", os.str()});
  }
  return out;
}

struct SmallSvd {
  Matrix left;     // V
  Vector singular; // S, descending, nonnegative
  Matrix right;    // W;  M = V diag(S) W'
};

inline SmallSvd svd_small(const Matrix& m) {
  if (!m.allFinite()) throw Error(ErrorKind::DataFormat, "svd_small: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

namespace detail {

template <typename F>
Matrix psd_function(const Matrix& m, double relative_floor, F f, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorKind::Dimension, std::string(what) + ": not square");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, std::string(what) + ": eigensolver failed");
  const Vector& ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  if (!(lmax > 0.0) || !(ev.minCoeff() > relative_floor * lmax)) {
    std::ostringstream os;
    os << what << ": matrix is not positive definite (smallest eigenvalue " << ev.minCoeff() << ")";
    throw Error(ErrorKind::NotPositiveDefinite, os.str());
  }
  const Vector fv = ev.unaryExpr(f);
  Matrix r = es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

}  // namespace detail

// Symmetric R with R M R = I. Throws NotPositiveDefinite when the smallest
// eigenvalue is not above relative_floor * lambda_max.
inline Matrix inv_sqrt_psd(const Matrix& m, double relative_floor = 1e-12) {
  return detail::psd_function(m, relative_floor, [](double v) { return 1.0 / std::sqrt(v); }, "inv_sqrt_psd");
}

inline Matrix sqrt_psd(const Matrix& m, double relative_floor = 1e-12) {
  return detail::psd_function(m, relative_floor, [](double v) { return std::sqrt(v); }, "sqrt_psd");
}

inline bool is_positive_definite(const Matrix& m, double relative_floor = 1e-12) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  const double lmax = es.eigenvalues().maxCoeff();
  return lmax > 0.0 && es.eigenvalues().minCoeff() > relative_floor * lmax;
}

}  // namespace noisy_mds
