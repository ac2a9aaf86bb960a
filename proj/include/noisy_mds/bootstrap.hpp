#pragma once

// Multiplier (wild) and empirical (residual-resampling) bootstrap for the
// maximal whitened embedding deviation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noisy_mds/alignment.hpp"
#include "noisy_mds/error.hpp"
#include "noisy_mds/inference.hpp"
#include "noisy_mds/mds.hpp"
#include "noisy_mds/parallel.hpp"
#include "noisy_mds/rng.hpp"

namespace noisy_mds {

// Mean-zero, unit-variance multiplier laws.
enum class MultiplierFamily { Gaussian, Rademacher, Uniform };

inline const char* to_string(MultiplierFamily f) {
  switch (f) {
    case MultiplierFamily::Gaussian: return "gaussian";
    case MultiplierFamily::Rademacher: return "rademacher";
    case MultiplierFamily::Uniform: return "uniform";
  }
  return "unknown";
}

inline MultiplierFamily parse_multiplier_family(const std::string& s) {
  if (s == "gaussian") return MultiplierFamily::Gaussian;
  if (s == "rademacher") return MultiplierFamily::Rademacher;
  if (s == "uniform") return MultiplierFamily::Uniform;
  throw Error(ErrorKind::Usage, "unknown multiplier family '" + s + "'");
}

inline double draw_multiplier(MultiplierFamily f, SeededRng& rng) {
  switch (f) {
    case MultiplierFamily::Gaussian: return rng.normal();
    case MultiplierFamily::Rademacher: return rng.coin() ? 1.0 : -1.0;
    case MultiplierFamily::Uniform: {
      static const double half_width = std::sqrt(3.0);
      return rng.uniform(-half_width, half_width);
    }
  }
  return 0.0;
}

struct BootstrapMethod {
  enum class Kind { Multiplier, Empirical };
  Kind kind = Kind::Multiplier;
  MultiplierFamily family = MultiplierFamily::Gaussian;

  static BootstrapMethod multiplier(MultiplierFamily f = MultiplierFamily::Gaussian) {
    return {Kind::Multiplier, f};
  }
  static BootstrapMethod empirical() { return {Kind::Empirical, MultiplierFamily::Gaussian}; }

  std::string label() const {
    return kind == Kind::Empirical ? std::string("empirical") : std::string("multiplier:") + to_string(family);
  }
};

struct BootstrapRun {
  std::vector<double> statistics;  // surviving replicates, in replicate order
  int B = 0;                       // requested replicates
  int failed = 0;                  // replicates dropped (non-Euclidean top-p spectrum)
  double quantile_alpha = 0.0;
  double quantile_value = 0.0;
  BootstrapMethod method;
  std::uint64_t master_seed = 0;
};

// Index (0-based) of the ceil((1 - alpha) B)-th order statistic.
inline std::size_t quantile_rank(std::size_t count, double alpha) {
  if (count == 0) throw Error(ErrorKind::Usage, "quantile of an empty sample");
  const double target = (1.0 - alpha) * static_cast<double>(count);
  auto k = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
  k = std::clamp<std::size_t>(k, 1, count);
  return k - 1;
}

// inf{t : F_B(t) >= 1 - alpha} for the empirical law on the sample.
inline double empirical_quantile(std::vector<double> sample, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Usage, "alpha must lie in (0, 1)");
  const std::size_t k = quantile_rank(sample.size(), alpha);
  std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(k), sample.end());
  return sample[k];
}

// Quantities shared by every replicate of one bootstrap run.
struct BootstrapContext {
  const Embedding* embedding = nullptr;
  SymmetricMatrix fitted;         // Delta(X_hat)
  std::vector<Matrix> whitening;  // Omega_hat_i^{-1/2}, computed once from the original data
  EmbedOptions embed;
};

inline EmbedOptions bootstrap_embed_options();

inline BootstrapContext make_context(const Embedding& e, const SandwichCovariances& om,
                                     EmbedOptions embed = bootstrap_embed_options()) {
  BootstrapContext ctx;
  ctx.embedding = &e;
  ctx.fitted = fitted_dissimilarities(e);
  ctx.whitening = whiteners(om);
  ctx.embed = embed;
  ctx.embed.eigen.warm_start = e.eigenvectors;
  return ctx;
}

// Statistic for one bootstrap noise draw: re-embed Delta(X_hat) + noise, align
// U_hat^(b) onto U_hat, and take the maximal whitened deviation.
inline double replicate_statistic(const BootstrapContext& ctx, const SymmetricMatrix& noise) {
  const Embedding& e = *ctx.embedding;
  const Embedding boot = mds_embed(ctx.fitted + noise, static_cast<int>(e.p()), ctx.embed);
  const RigidRotation p_b = procrustes_rotation(boot.eigenvectors, e.eigenvectors);
  return max_whitened_deviation(e.coords, apply_inverse_rigid(p_b, boot.coords), ctx.whitening);
}

// R o E with r_ij drawn i.i.d. from the family for i < j.
inline SymmetricMatrix multiplier_noise(const ResidualMatrix& r, MultiplierFamily family, SeededRng& rng) {
  const Eigen::Index n = r.entries.rows();
  SymmetricMatrix eps = SymmetricMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) eps(i, j) = draw_multiplier(family, rng) * r.entries(i, j);
  eps.triangularView<Eigen::StrictlyUpper>() = eps.transpose();
  return eps;
}

// Centered residual pool {e_ij - e_bar : i < j}.
inline std::vector<double> centered_residual_pool(const ResidualMatrix& r) {
  const Eigen::Index n = r.entries.rows();
  std::vector<double> pool;
  pool.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) pool.push_back(r.entries(i, j) - r.mean);
  return pool;
}

inline SymmetricMatrix resampled_noise(const std::vector<double>& pool, Eigen::Index n, SeededRng& rng) {
  SymmetricMatrix eps = SymmetricMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) eps(i, j) = pool[rng.index(pool.size())];
  eps.triangularView<Eigen::StrictlyUpper>() = eps.transpose();
  return eps;
}

inline double multiplier_replicate(const Embedding& e, const ResidualMatrix& r, const SandwichCovariances& om_hat,
                                   MultiplierFamily family, SeededRng& rng) {
  const BootstrapContext ctx = make_context(e, om_hat);
  return replicate_statistic(ctx, multiplier_noise(r, family, rng));
}

inline void require_nondegenerate(const ResidualMatrix& r) {
  if (!(r.variance > 0.0))
    throw Error(ErrorKind::DegenerateResiduals, "residual variance is zero; the empirical bootstrap is undefined");
}

// Replicate of the i.i.d.-noise statistic: whitening by
// Omega^{-1/2} = (2 / sigma_hat) (X_hat'X_hat / n)^{1/2}.
inline double empirical_replicate(const Embedding& e, const ResidualMatrix& r, double sigma_hat, SeededRng& rng) {
  require_nondegenerate(r);
  if (!(sigma_hat > 0.0)) throw Error(ErrorKind::DegenerateResiduals, "sigma_hat must be positive");
  const BootstrapContext ctx = make_context(e, omega_iid(e, sigma_hat));
  return replicate_statistic(ctx, resampled_noise(centered_residual_pool(r), e.n(), rng));
}

inline EmbedOptions bootstrap_embed_options() {
  EmbedOptions o;
  o.eigen.tolerance = 1e-10;
  return o;
}

struct BootstrapOptions {
  int threads = 1;
  double max_failure_fraction = 0.01;
  EmbedOptions embed = bootstrap_embed_options();
};

struct BootstrapResult {
  BootstrapRun run;
  ConfidenceSet set;
};

namespace detail {

inline std::vector<std::optional<double>> run_replicates(const BootstrapContext& ctx, const ResidualMatrix& r,
                                                         const BootstrapMethod& method, int B,
                                                         std::uint64_t master_seed, int threads) {
  std::vector<std::optional<double>> stats(static_cast<std::size_t>(B));
  std::vector<double> pool;
  if (method.kind == BootstrapMethod::Kind::Empirical) pool = centered_residual_pool(r);
  const Eigen::Index n = r.entries.rows();
  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t b) {
    SeededRng rng(master_seed, b + 1);
    const SymmetricMatrix noise = method.kind == BootstrapMethod::Kind::Empirical
                                      ? resampled_noise(pool, n, rng)
                                      : multiplier_noise(r, method.family, rng);
    try {
      stats[b] = replicate_statistic(ctx, noise);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NonEuclideanRank) throw;
    }
  });
  return stats;
}

}  // namespace detail

// Collected replicate statistics, before any quantile is taken. Several
// nominal levels can then share one run.
inline BootstrapRun bootstrap_statistics(const Embedding& e, const ResidualMatrix& r,
                                         const SandwichCovariances& covariances, const BootstrapMethod& method, int B,
                                         std::uint64_t master_seed, const BootstrapOptions& opt = {}) {
  if (B < 1) throw Error(ErrorKind::Usage, "bootstrap needs B >= 1");
  if (method.kind == BootstrapMethod::Kind::Empirical) require_nondegenerate(r);
  const BootstrapContext ctx = make_context(e, covariances, opt.embed);
  const auto raw = detail::run_replicates(ctx, r, method, B, master_seed, opt.threads);
  BootstrapRun run;
  run.B = B;
  run.method = method;
  run.master_seed = master_seed;
  for (const auto& s : raw) {
    if (s) run.statistics.push_back(*s);
    else ++run.failed;
  }
  if (static_cast<double>(run.failed) > opt.max_failure_fraction * B || run.statistics.empty()) {
    std::ostringstream os;
    os << run.failed << " of " << B << " bootstrap replicates failed (limit "
       << opt.max_failure_fraction * 100.0 << "%)";
    throw Error(ErrorKind::ReplicateBudget, os.str());
  }
  return run;
}

// Shapes used by a bootstrap confidence set: the plug-in Omega_hat for the
// multiplier bootstrap, the shared i.i.d. covariance for the empirical one.
inline SandwichCovariances bootstrap_shapes(const Embedding& e, const ResidualMatrix& r,
                                            const SandwichCovariances& plugin, const BootstrapMethod& method) {
  if (method.kind == BootstrapMethod::Kind::Empirical) {
    require_nondegenerate(r);
    return omega_iid(e, std::sqrt(r.variance));
  }
  return plugin;
}

// Full procedure: B replicates on streams 1..B of master_seed, quantile by the
// order-statistic rule, and ellipsoids with that quantile as radius.
// `covariances` is the plug-in Omega_hat; the empirical method derives its
// own shared covariance from the residual variance.
inline BootstrapResult run_bootstrap(const Embedding& e, const ResidualMatrix& r,
                                     const SandwichCovariances& covariances, const BootstrapMethod& method, int B,
                                     double alpha, std::uint64_t master_seed, const BootstrapOptions& opt = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Usage, "alpha must lie in (0, 1)");
  SandwichCovariances shapes = bootstrap_shapes(e, r, covariances, method);
  BootstrapRun run = bootstrap_statistics(e, r, shapes, method, B, master_seed, opt);
  run.quantile_alpha = alpha;
  run.quantile_value = empirical_quantile(run.statistics, alpha);
  const SetMethod sm =
      method.kind == BootstrapMethod::Kind::Empirical ? SetMethod::Empirical : SetMethod::Multiplier;
  ConfidenceSet set = make_confidence_set(e.coords, std::move(shapes), run.quantile_value, alpha, sm);
  return {std::move(run), std::move(set)};
}

}  // namespace noisy_mds
