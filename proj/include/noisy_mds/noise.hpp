#pragma once

// Noise models for observed dissimilarities D = Delta(X) + E, their variance
// oracles, and assumption diagnostics for a (configuration, variance) pair.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "noisy_mds/error.hpp"
#include "noisy_mds/linalg.hpp"
#include "noisy_mds/mds.hpp"
#include "noisy_mds/rng.hpp"

namespace noisy_mds {

enum class NoiseKind { Additive, Multiplicative, LogNormal };

inline const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::Additive: return "additive";
    case NoiseKind::Multiplicative: return "multiplicative";
    case NoiseKind::LogNormal: return "lognormal";
  }
  return "unknown";
}

inline NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "additive") return NoiseKind::Additive;
  if (s == "multiplicative") return NoiseKind::Multiplicative;
  if (s == "lognormal" || s == "log-normal" || s == "log_normal") return NoiseKind::LogNormal;
  throw Error(ErrorKind::Usage, "unknown noise kind '" + s + "'");
}

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Additive;
  double sigma = 1.0;  // scale of the Gaussian xi
  // LogNormal only: subtract the analytic mean delta (e^{sigma^2/2} - 1).
  bool mean_correct = false;
};

// epsilon for one pair given its true dissimilarity and a draw of xi.
inline double noise_entry(const NoiseSpec& spec, double delta, double xi) {
  switch (spec.kind) {
    case NoiseKind::Additive:
      return xi;
    case NoiseKind::Multiplicative:
      return delta * xi;
    case NoiseKind::LogNormal: {
      double eps = delta * std::expm1(xi);
      if (spec.mean_correct) eps -= delta * std::expm1(0.5 * spec.sigma * spec.sigma);
      return eps;
    }
  }
  return 0.0;
}

// Symmetric hollow noise matrix; one draw per pair i < j, mirrored.
inline SymmetricMatrix generate_noise(const SymmetricMatrix& delta, const NoiseSpec& spec, SeededRng& rng) {
  if (spec.sigma < 0.0) throw Error(ErrorKind::Usage, "noise sigma must be nonnegative");
  const Eigen::Index n = delta.rows();
  SymmetricMatrix eps = SymmetricMatrix::Zero(n, n);
  if (spec.sigma == 0.0) return eps;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) eps(i, j) = noise_entry(spec, delta(i, j), spec.sigma * rng.normal());
  eps.triangularView<Eigen::StrictlyUpper>() = eps.transpose();
  return eps;
}

inline SymmetricMatrix noisy_dissimilarities(const SymmetricMatrix& delta, const NoiseSpec& spec, SeededRng& rng) {
  return delta + generate_noise(delta, spec, rng);
}

// sigma^2_ij for each pair (hollow).
inline SymmetricMatrix variance_oracle(const SymmetricMatrix& delta, const NoiseSpec& spec) {
  const Eigen::Index n = delta.rows();
  const double s2 = spec.sigma * spec.sigma;
  SymmetricMatrix v(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) {
        v(i, j) = 0.0;
        continue;
      }
      const double d2 = delta(i, j) * delta(i, j);
      switch (spec.kind) {
        case NoiseKind::Additive: v(i, j) = s2; break;
        case NoiseKind::Multiplicative: v(i, j) = s2 * d2; break;
        case NoiseKind::LogNormal: v(i, j) = d2 * std::expm1(s2) * std::exp(s2); break;
      }
    }
  return v;
}

struct DiagnosticsReport {
  double max_point_norm = 0.0;          // R_x = max_i ||x_i||
  Vector scaled_singular_values;        // singular values of X / sqrt(n)
  double kappa = 0.0;                   // smallest kappa with n/k^2 <= lambda_p, lambda_1 <= k^2 n
  double min_relative_gap = 0.0;        // min_k (lambda_k - lambda_{k+1}) / lambda_1
  double min_noise_eigenvalue = 0.0;    // min_i lambda_min(sum_k sigma^2_ik u_k u_k')
  double max_variance = 0.0;            // max sigma^2_ij
  std::vector<int> rows_with_few_observations;  // #{k : sigma_ik^2 > 0} < p
  bool noise_lower_bound_violated = false;
  // Proxy for the sub-exponential scale: max |eps_ij| of one draw, when supplied.
  std::optional<double> max_abs_noise;
  std::optional<int> negative_dissimilarities;
  std::vector<Warning> warnings;
};

inline DiagnosticsReport check_assumptions(const Configuration& x, const SymmetricMatrix& sigma2,
                                           const SymmetricMatrix* noise = nullptr,
                                           const SymmetricMatrix* observed = nullptr, double tolerance = 1e-12) {
  const Eigen::Index n = x.n();
  const Eigen::Index p = x.p();
  if (sigma2.rows() != n || sigma2.cols() != n) throw Error(ErrorKind::Dimension, "check_assumptions: shapes differ");
  DiagnosticsReport r;
  r.max_point_norm = x.coords.rowwise().norm().maxCoeff();

  Eigen::JacobiSVD<Matrix> svd(x.coords, Eigen::ComputeThinU);
  const Vector s = svd.singularValues() / std::sqrt(static_cast<double>(n));
  r.scaled_singular_values = s;
  const double smin = s(p - 1);
  r.kappa = smin > 0 ? std::max({s(0), 1.0 / smin, 1.0}) : std::numeric_limits<double>::infinity();
  r.min_relative_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 < p; ++k)
    r.min_relative_gap = std::min(r.min_relative_gap, (s(k) * s(k) - s(k + 1) * s(k + 1)) / (s(0) * s(0)));
  if (r.min_relative_gap < 1e-8)
    r.warnings.push_back({"near_degenerate_spectrum", "configuration eigenvalues are not well separated"});
  if (smin <= 0) r.warnings.push_back({"rank_deficient", "configuration is not full rank"});

  const Matrix& u = svd.matrixU();
  r.max_variance = 0.0;
  r.min_noise_eigenvalue = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix m = Matrix::Zero(p, p);
    int positive = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double v = sigma2(i, k);
      r.max_variance = std::max(r.max_variance, v);
      if (v > 0.0) {
        ++positive;
        m.noalias() += v * u.row(k).transpose() * u.row(k);
      }
    }
    if (positive < p) r.rows_with_few_observations.push_back(static_cast<int>(i));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    r.min_noise_eigenvalue = std::min(r.min_noise_eigenvalue, es.eigenvalues()(0));
  }
  r.noise_lower_bound_violated =
      !(r.min_noise_eigenvalue > tolerance * std::max(r.max_variance, 1.0)) || !r.rows_with_few_observations.empty();
  if (r.noise_lower_bound_violated)
    r.warnings.push_back({"noise_variance_lower_bound", "per-point noise variance is not bounded below"});

  if (noise) r.max_abs_noise = noise->cwiseAbs().maxCoeff();
  if (observed) {
    int neg = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i)
        if ((*observed)(i, j) < 0.0) ++neg;
    r.negative_dissimilarities = neg;
  }
  return r;
}

}  // namespace noisy_mds
