#pragma once

// Sandwich covariances, residuals, extreme-value normalization and the
// Gumbel-calibrated confidence ellipsoids.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noisy_mds/alignment.hpp"
#include "noisy_mds/error.hpp"
#include "noisy_mds/linalg.hpp"
#include "noisy_mds/mds.hpp"

namespace noisy_mds {

struct ResidualMatrix {
  SymmetricMatrix entries;  // D - Delta(X_hat), hollow
  double mean = 0.0;        // over i < j
  double variance = 0.0;    // sum_{i<j} (e_ij - mean)^2 / C(n,2)
};

inline ResidualMatrix residuals(const SymmetricMatrix& d, const Embedding& e) {
  const Eigen::Index n = e.n();
  if (d.rows() != n || d.cols() != n) throw Error(ErrorKind::Dimension, "residuals: shapes differ");
  ResidualMatrix r;
  const SymmetricMatrix fitted = fitted_dissimilarities(e);
  r.entries = d - fitted;
  r.entries.diagonal().setZero();
  // Differences at the rounding level of the fitted values are exact zeros.
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * fitted.cwiseAbs().maxCoeff();
  r.entries = r.entries.unaryExpr([floor](double v) { return std::abs(v) <= floor ? 0.0 : v; });
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) sum += r.entries(i, j);
  r.mean = sum / pairs;
  double ss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double c = r.entries(i, j) - r.mean;
      ss += c * c;
    }
  r.variance = ss / pairs;
  return r;
}

enum class CovarianceSource { Oracle, PlugIn, IIDSpherical };

inline const char* to_string(CovarianceSource s) {
  switch (s) {
    case CovarianceSource::Oracle: return "oracle";
    case CovarianceSource::PlugIn: return "plugin";
    case CovarianceSource::IIDSpherical: return "iid_spherical";
  }
  return "unknown";
}

struct SandwichCovariances {
  std::vector<Matrix> per_point;
  CovarianceSource source = CovarianceSource::PlugIn;
  std::vector<bool> positive_definite;

  std::size_t size() const { return per_point.size(); }

  std::vector<int> failures() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < positive_definite.size(); ++i)
      if (!positive_definite[i]) out.push_back(static_cast<int>(i));
    return out;
  }
};

namespace detail {

inline void record_pd(SandwichCovariances& c) {
  c.positive_definite.resize(c.per_point.size());
  for (std::size_t i = 0; i < c.per_point.size(); ++i) c.positive_definite[i] = is_positive_definite(c.per_point[i]);
}

// (n/4) G^{-1} (X' diag(w_i.) X) G^{-1} for every row i of `weights`.
inline std::vector<Matrix> sandwich(const Matrix& x, const SymmetricMatrix& weights) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (weights.rows() != n || weights.cols() != n) throw Error(ErrorKind::Dimension, "sandwich: shapes differ");
  const Matrix gram = x.transpose() * x;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success || !is_positive_definite(gram))
    throw Error(ErrorKind::SingularGram, "X'X is singular");
  const Matrix gram_inv = llt.solve(Matrix::Identity(p, p));
  const double scale = static_cast<double>(n) / 4.0;
  std::vector<Matrix> out(static_cast<std::size_t>(n));
  Matrix weighted(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    weighted = weights.row(i).transpose().asDiagonal() * x;
    const Matrix meat = x.transpose() * weighted;
    Matrix om = scale * gram_inv * meat * gram_inv;
    out[static_cast<std::size_t>(i)] = 0.5 * (om + om.transpose());
  }
  return out;
}

}  // namespace detail

// Omega_i = (n/4)(X'X)^{-1}(X' Sigma_i X)(X'X)^{-1} with Sigma_i = diag(sigma2(i, .)).
inline SandwichCovariances omega_oracle(const Configuration& x, const SymmetricMatrix& sigma2) {
  SandwichCovariances c;
  c.source = CovarianceSource::Oracle;
  c.per_point = detail::sandwich(x.coords, sigma2);
  detail::record_pd(c);
  return c;
}

// Plug-in estimate with Sigma_hat_i = diag(e_i1^2, ..., e_in^2).
inline SandwichCovariances omega_plugin(const Embedding& e, const ResidualMatrix& r) {
  SandwichCovariances c;
  c.source = CovarianceSource::PlugIn;
  c.per_point = detail::sandwich(e.coords, r.entries.cwiseProduct(r.entries));
  detail::record_pd(c);
  return c;
}

// (sigma_hat^2 / 4) (X_hat'X_hat / n)^{-1}, shared by every point.
inline SandwichCovariances omega_iid(const Embedding& e, double sigma_hat) {
  const Eigen::Index n = e.n();
  const Matrix scatter = e.coords.transpose() * e.coords / static_cast<double>(n);
  if (!is_positive_definite(scatter)) throw Error(ErrorKind::SingularGram, "X'X is singular");
  const Matrix om = 0.25 * sigma_hat * sigma_hat * scatter.inverse();
  SandwichCovariances c;
  c.source = CovarianceSource::IIDSpherical;
  c.per_point.assign(static_cast<std::size_t>(n), 0.5 * (om + om.transpose()));
  detail::record_pd(c);
  return c;
}

// R Omega_i R' for every i; moves covariances between frames.
inline SandwichCovariances conjugate(const SandwichCovariances& c, const Matrix& r) {
  SandwichCovariances out = c;
  for (auto& m : out.per_point) {
    m = r * m * r.transpose();
    m = 0.5 * (m + m.transpose()).eval();
  }
  return out;
}

// Adds eps * tr(Omega_i)/p * I to each matrix. Off unless requested.
inline SandwichCovariances apply_ridge(const SandwichCovariances& c, double eps) {
  SandwichCovariances out = c;
  for (auto& m : out.per_point) {
    const Eigen::Index p = m.rows();
    m += eps * m.trace() / static_cast<double>(p) * Matrix::Identity(p, p);
  }
  detail::record_pd(out);
  return out;
}

// Omega_i^{-1/2} for each point. Throws NotPositiveDefinite listing every
// offending index.
inline std::vector<Matrix> whiteners(const SandwichCovariances& c) {
  std::vector<Matrix> out(c.size());
  std::vector<int> bad;
  for (std::size_t i = 0; i < c.size(); ++i) {
    try {
      out[i] = inv_sqrt_psd(c.per_point[i]);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NotPositiveDefinite) throw;
      bad.push_back(static_cast<int>(i));
    }
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << bad.size() << " covariance matri" << (bad.size() == 1 ? "x is" : "ces are")
       << " not positive definite (first index " << bad.front() << ")";
    throw Error(ErrorKind::NotPositiveDefinite, os.str(), bad);
  }
  return out;
}

// max_i sqrt(n) ||W_i (a_i - b_i)||.
inline double max_whitened_deviation(const Matrix& a, const Matrix& b, const std::vector<Matrix>& white) {
  const Eigen::Index n = a.rows();
  if (b.rows() != n || b.cols() != a.cols() || static_cast<Eigen::Index>(white.size()) != n)
    throw Error(ErrorKind::Dimension, "max_whitened_deviation: shapes differ");
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector diff = (a.row(i) - b.row(i)).transpose();
    best = std::max(best, (white[static_cast<std::size_t>(i)] * diff).squaredNorm());
  }
  return std::sqrt(static_cast<double>(n) * best);
}

// max_i sqrt(n) ||Omega_i^{-1/2}(aligned_truth_i - x_hat_i)||, with Omega in
// the embedding frame. Real-data users have no truth: this is for simulation.
inline double statistic_T(const Matrix& aligned_truth, const Embedding& e, const SandwichCovariances& om) {
  return max_whitened_deviation(aligned_truth, e.coords, whiteners(om));
}

struct GumbelNormalization {
  long long n = 0;
  int p = 0;
  double b_n = 0.0;
  double a_n = 0.0;
};

inline GumbelNormalization gumbel_normalization(long long n, int p) {
  if (n < 2 || p < 1) throw Error(ErrorKind::InvalidRegime, "gumbel_normalization: need n >= 2 and p >= 1");
  const double ln = std::log(static_cast<double>(n));
  const double b2 = 2.0 * ln + (p - 2) * std::log(ln) - 2.0 * std::lgamma(0.5 * p);
  if (!(b2 > 0.0)) {
    std::ostringstream os;
    os << "b_n^2 = " << b2 << " <= 0 for n = " << n << ", p = " << p;
    throw Error(ErrorKind::InvalidRegime, os.str());
  }
  GumbelNormalization g;
  g.n = n;
  g.p = p;
  g.b_n = std::sqrt(b2);
  g.a_n = 1.0 / g.b_n;
  return g;
}

// (1 - alpha)-quantile of the standard Gumbel law.
inline double gumbel_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Usage, "gumbel_quantile: alpha must lie in (0, 1)");
  return -std::log(-std::log1p(-alpha));
}

struct TailIdentity {
  double lhs = 0.0;  // P(chi_2 > u_n(t)) = exp(-u_n(t)^2 / 2)
  double rhs = 0.0;  // (1/n) exp(-t - t^2 / (2 b_n^2))
};

// For p = 2 the chi-square tail is exactly exp(-u^2/2) and both sides agree.
inline TailIdentity gumbel_tail_identity_check(long long n, int p, double t) {
  if (p != 2) throw Error(ErrorKind::Usage, "gumbel_tail_identity_check: only p = 2 has a closed-form tail");
  const GumbelNormalization g = gumbel_normalization(n, p);
  const double u = g.a_n * t + g.b_n;
  if (!(u > 0.0)) throw Error(ErrorKind::InvalidRegime, "u_n(t) = a_n t + b_n must be positive");
  TailIdentity out;
  out.lhs = std::exp(-0.5 * u * u);
  out.rhs = std::exp(-t - t * t / (2.0 * g.b_n * g.b_n)) / static_cast<double>(n);
  return out;
}

enum class SetMethod { PluginGumbel, OracleGumbel, Multiplier, Empirical };

inline const char* to_string(SetMethod m) {
  switch (m) {
    case SetMethod::PluginGumbel: return "plugin";
    case SetMethod::OracleGumbel: return "oracle";
    case SetMethod::Multiplier: return "multiplier";
    case SetMethod::Empirical: return "empirical";
  }
  return "unknown";
}

// Product of ellipsoids {y : sqrt(n) ||Omega_i^{-1/2}(y - center_i)|| <= radius}.
struct ConfidenceSet {
  Matrix centers;
  SandwichCovariances shapes;
  double radius = 0.0;
  double alpha = 0.0;
  SetMethod method = SetMethod::PluginGumbel;
  std::vector<Matrix> whitening;  // derived from shapes

  Eigen::Index n() const { return centers.rows(); }

  double distance(Eigen::Index i, const Vector& y) const {
    const Vector diff = y - centers.row(i).transpose();
    return std::sqrt(static_cast<double>(n())) * (whitening[static_cast<std::size_t>(i)] * diff).norm();
  }

  bool contains(Eigen::Index i, const Vector& y) const { return distance(i, y) <= radius; }

  // Every row of `points` inside its own ellipsoid.
  bool contains_all(const Matrix& points) const {
    return max_whitened_deviation(points, centers, whitening) <= radius;
  }
};

inline ConfidenceSet make_confidence_set(const Matrix& centers, SandwichCovariances shapes, double radius,
                                         double alpha, SetMethod method) {
  if (static_cast<Eigen::Index>(shapes.size()) != centers.rows())
    throw Error(ErrorKind::Dimension, "confidence set: centers and shapes disagree on n");
  if (!(radius > 0.0)) throw Error(ErrorKind::EmptySet, "confidence set radius is not positive; the set is empty");
  ConfidenceSet cs;
  cs.centers = centers;
  cs.whitening = whiteners(shapes);
  cs.shapes = std::move(shapes);
  cs.radius = radius;
  cs.alpha = alpha;
  cs.method = method;
  return cs;
}

// Radius b_n + a_n q_{1-alpha}.
inline double gumbel_radius(long long n, int p, double alpha) {
  const GumbelNormalization g = gumbel_normalization(n, p);
  return g.b_n + g.a_n * gumbel_quantile(alpha);
}

inline ConfidenceSet plugin_confidence_set(const Embedding& e, const SandwichCovariances& om, double alpha) {
  return make_confidence_set(e.coords, om, gumbel_radius(e.n(), static_cast<int>(e.p()), alpha), alpha,
                             SetMethod::PluginGumbel);
}

// Oracle ellipsoids: Omega_i lives in the frame of X, so it is carried to the
// embedding frame by the truth alignment P_hat.
inline ConfidenceSet oracle_confidence_set(const Embedding& e, const SandwichCovariances& om_truth_frame,
                                           const RigidRotation& p_hat, double alpha) {
  return make_confidence_set(e.coords, conjugate(om_truth_frame, p_hat.matrix),
                             gumbel_radius(e.n(), static_cast<int>(e.p()), alpha), alpha, SetMethod::OracleGumbel);
}

}  // namespace noisy_mds
