#pragma once

// Orthogonal Procrustes alignment and the rigid map g_hat between the latent
// configuration and its embedding.

#include <cmath>

#include "noisy_mds/linalg.hpp"
#include "noisy_mds/mds.hpp"

namespace noisy_mds {

// Element of O(p); reflections are allowed.
struct RigidRotation {
  Matrix matrix;
  bool degenerate = false;  // b'a singular: optimum not unique
};

// argmin over orthogonal Q of ||a - b Q||_F, via the SVD of b'a.
inline RigidRotation procrustes_rotation(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::Dimension, "procrustes_rotation: shapes differ");
  if (a.rows() < a.cols()) throw Error(ErrorKind::Dimension, "procrustes_rotation: need n >= p");
  const SmallSvd svd = svd_small(b.transpose() * a);
  RigidRotation r;
  r.matrix = svd.left * svd.right.transpose();
  const double top = svd.singular.size() > 0 ? svd.singular(0) : 0.0;
  const double tie = 1e-12 * std::max(top, 1e-300);
  // The polar factor is unique iff b'a is nonsingular; repeated nonzero
  // singular values do not create extra optima.
  if (svd.singular.size() > 0 && svd.singular(svd.singular.size() - 1) <= tie) r.degenerate = true;
  return r;
}

struct TruthAlignment {
  RigidRotation rotation;  // P_hat = Q_hat' Q, so that g_hat(x) = P_hat x
  Matrix aligned;          // g_hat(X) = X P_hat', rows in the embedding frame
  std::vector<Warning> warnings;
};

// Reduced SVD X = U Lambda^{1/2} Q, Q_hat = argmin ||U_hat - U Q||, P_hat = Q_hat' Q.
inline TruthAlignment align_truth_to_embedding(const Configuration& x, const Embedding& e) {
  if (x.n() != e.n() || x.p() != e.p()) throw Error(ErrorKind::Dimension, "align_truth_to_embedding: shapes differ");
  const Eigen::Index p = x.p();
  TruthAlignment out;

  Eigen::SelfAdjointEigenSolver<Matrix> es(x.coords.transpose() * x.coords);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "scatter eigensolver failed");
  Matrix v(p, p);
  Vector lambda(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    lambda(k) = es.eigenvalues()(p - 1 - k);
    v.col(k) = es.eigenvectors().col(p - 1 - k);
  }
  if (!(lambda(p - 1) > 0.0)) throw Error(ErrorKind::SingularGram, "latent configuration is rank deficient");
  for (Eigen::Index k = 0; k + 1 < p; ++k)
    if (lambda(k) - lambda(k + 1) < 1e-8 * lambda(0))
      out.warnings.push_back({"near_degenerate_spectrum", "latent scatter matrix has nearly repeated eigenvalues"});

  const Matrix q = v.transpose();
  const Matrix u = x.coords * v * lambda.cwiseSqrt().cwiseInverse().asDiagonal();
  const RigidRotation q_hat = procrustes_rotation(e.eigenvectors, u);
  out.rotation.matrix = q_hat.matrix.transpose() * q;
  out.rotation.degenerate = q_hat.degenerate;
  out.aligned = x.coords * out.rotation.matrix.transpose();
  return out;
}

// Row-wise inverse of x -> R x: returns Y R.
inline Matrix apply_inverse_rigid(const RigidRotation& r, const Matrix& y) {
  if (y.cols() != r.matrix.rows()) throw Error(ErrorKind::Dimension, "apply_inverse_rigid: shapes differ");
  return y * r.matrix;
}

// Row-wise x -> R x: returns Y R'.
inline Matrix apply_rigid(const RigidRotation& r, const Matrix& y) {
  if (y.cols() != r.matrix.cols()) throw Error(ErrorKind::Dimension, "apply_rigid: shapes differ");
  return y * r.matrix.transpose();
}

}  // namespace noisy_mds
