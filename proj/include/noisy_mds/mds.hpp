#pragma once

// Classical multidimensional scaling: the forward map X -> Delta(X) and the
// spectral embedding D -> X_hat = U_hat Lambda_hat^{1/2}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "noisy_mds/error.hpp"
#include "noisy_mds/linalg.hpp"

namespace noisy_mds {

struct Configuration {
  Matrix coords;  // n x p
  bool is_centered = false;

  Configuration() = default;
  explicit Configuration(Matrix c, bool centered = false) : coords(std::move(c)), is_centered(centered) {}

  Eigen::Index n() const { return coords.rows(); }
  Eigen::Index p() const { return coords.cols(); }

  static Configuration centered(const Matrix& raw) { return Configuration(center_rows(raw).centered, true); }
};

struct Embedding {
  Matrix coords;        // X_hat = U_hat diag(sqrt(eigenvalues))
  Vector eigenvalues;   // Lambda_hat, descending, > 0
  Matrix eigenvectors;  // U_hat
  std::vector<Warning> warnings;

  Eigen::Index n() const { return coords.rows(); }
  Eigen::Index p() const { return coords.cols(); }
};

// Entry (i,j) = ||x_i - x_j||^2.
inline SymmetricMatrix squared_distance_matrix(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw Error(ErrorKind::Dimension, "squared_distance_matrix: need n >= 2");
  if (!x.allFinite()) throw Error(ErrorKind::DataFormat, "squared_distance_matrix: non-finite coordinates");
  SymmetricMatrix d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (x.row(i) - x.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

inline SymmetricMatrix squared_distance_matrix(const Configuration& x) { return squared_distance_matrix(x.coords); }

struct EmbedOptions {
  EigenOptions eigen;
  double hollow_tolerance = 1e-12;
};

// Algorithm: double-center, take the p largest eigenpairs, scale by sqrt.
// Throws NonEuclideanRank when any of the top-p eigenvalues is <= 0. An
// eigenvalue within n * eps * lambda_1 of zero is roundoff and counts as zero.
inline Embedding mds_embed(const SymmetricMatrix& d, int p, const EmbedOptions& opt = {}) {
  const Eigen::Index n = d.rows();
  if (d.cols() != n) throw Error(ErrorKind::Dimension, "mds_embed: matrix is not square");
  if (p < 1 || p >= n) {
    std::ostringstream os;
    os << "mds_embed: need 1 <= p < n (p = " << p << ", n = " << n << ")";
    throw Error(ErrorKind::Dimension, os.str());
  }
  Embedding e;
  const double diag_max = d.diagonal().cwiseAbs().maxCoeff();
  if (diag_max > opt.hollow_tolerance) {
    std::ostringstream os;
    os << "input is not hollow: max |d_ii| = " << diag_max;
    e.warnings.push_back({"not_hollow", os.str()});
  }
  SpectralPair sp = top_p_eigs(double_center(d), p, opt.eigen);
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * std::max(sp.values(0), 0.0);
  for (int k = 0; k < p; ++k) {
    if (!(sp.values(k) > floor)) {
      std::ostringstream os;
      os << "eigenvalue " << k + 1 << " of the double-centered matrix is " << sp.values(k)
         << "; the top " << p << " eigenvalues must be positive";
      throw Error(ErrorKind::NonEuclideanRank, os.str());
    }
  }
  e.eigenvalues = std::move(sp.values);
  e.eigenvectors = std::move(sp.vectors);
  e.coords = e.eigenvectors * e.eigenvalues.cwiseSqrt().asDiagonal();
  for (auto& w : sp.warnings) e.warnings.push_back(std::move(w));
  return e;
}

inline SymmetricMatrix fitted_dissimilarities(const Embedding& e) { return squared_distance_matrix(e.coords); }

}  // namespace noisy_mds
