#pragma once

// Monte Carlo harness: coverage of the confidence-set constructions, KS
// distances to the Gumbel law, and the synthetic latent configurations used
// to drive them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noisy_mds/alignment.hpp"
#include "noisy_mds/bootstrap.hpp"
#include "noisy_mds/error.hpp"
#include "noisy_mds/inference.hpp"
#include "noisy_mds/mds.hpp"
#include "noisy_mds/noise.hpp"
#include "noisy_mds/parallel.hpp"
#include "noisy_mds/rng.hpp"

namespace noisy_mds {

inline double gumbel_cdf(double t) { return std::exp(-std::exp(-t)); }

// sup_t |F_m(t) - G(t)|, checking both one-sided limits at every order statistic.
inline double ks_distance_to_gumbel(std::vector<double> sample) {
  if (sample.empty()) throw Error(ErrorKind::Usage, "KS distance of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double m = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double g = gumbel_cdf(sample[k]);
    d = std::max({d, static_cast<double>(k + 1) / m - g, g - static_cast<double>(k) / m});
  }
  return d;
}

// sup_t |F_a(t) - F_b(t)| for two empirical laws.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::Usage, "KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// Synthetic latent configurations.
//   ellipse       uniform on the filled ellipse with semi-axes 2 and 1 (p = 2)
//   four_squares  equal mixture of four unit squares centred at (+-1.5, +-1.5) (p = 2)
//   grid          square lattice with unit spacing, row-major, first n sites (p = 2)
//   box           uniform box with per-axis standard deviations 1, 0.9, 0.8, ... (any p)
//   clusters      five Gaussian clumps of random size and location (p = 2)
enum class LatentKind { Ellipse, FourSquares, Grid, Box, Clusters };

inline const char* to_string(LatentKind k) {
  switch (k) {
    case LatentKind::Ellipse: return "ellipse";
    case LatentKind::FourSquares: return "four_squares";
    case LatentKind::Grid: return "grid";
    case LatentKind::Box: return "box";
    case LatentKind::Clusters: return "clusters";
  }
  return "unknown";
}

inline LatentKind parse_latent_kind(const std::string& s) {
  if (s == "ellipse") return LatentKind::Ellipse;
  if (s == "four_squares") return LatentKind::FourSquares;
  if (s == "grid") return LatentKind::Grid;
  if (s == "box") return LatentKind::Box;
  if (s == "clusters") return LatentKind::Clusters;
  throw Error(ErrorKind::Usage, "unknown latent generator '" + s + "'");
}

inline bool latent_supports_dimension(LatentKind k, int p) { return k == LatentKind::Box ? p >= 1 : p == 2; }

inline double box_std(int axis) { return std::max(1.0 - 0.1 * axis, 0.1); }

// Draws n points and centres them.
inline Configuration generate_latent(LatentKind kind, int n, int p, SeededRng& rng) {
  if (n < 2) throw Error(ErrorKind::Usage, "latent generator needs n >= 2");
  if (!latent_supports_dimension(kind, p)) {
    std::ostringstream os;
    os << "latent generator '" << to_string(kind) << "' does not support p = " << p;
    throw Error(ErrorKind::Usage, os.str());
  }
  Matrix x(n, p);
  switch (kind) {
    case LatentKind::Ellipse:
      for (int i = 0; i < n; ++i) {
        double u, v;
        do {
          u = rng.uniform(-1.0, 1.0);
          v = rng.uniform(-1.0, 1.0);
        } while (u * u + v * v > 1.0);
        x(i, 0) = 2.0 * u;
        x(i, 1) = v;
      }
      break;
    case LatentKind::FourSquares:
      for (int i = 0; i < n; ++i) {
        const auto q = rng.index(4);
        x(i, 0) = (q & 1 ? 1.5 : -1.5) + rng.uniform(-0.5, 0.5);
        x(i, 1) = (q & 2 ? 1.5 : -1.5) + rng.uniform(-0.5, 0.5);
      }
      break;
    case LatentKind::Grid: {
      const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
      for (int i = 0; i < n; ++i) {
        x(i, 0) = i % side;
        x(i, 1) = i / side;
      }
      break;
    }
    case LatentKind::Box:
      for (int k = 0; k < p; ++k) {
        const double half = std::sqrt(3.0) * box_std(k);
        for (int i = 0; i < n; ++i) x(i, k) = rng.uniform(-half, half);
      }
      break;
    case LatentKind::Clusters: {
      constexpr int kClusters = 5;
      Matrix centres(kClusters, 2);
      std::vector<double> weight(kClusters), spread(kClusters);
      double total = 0.0;
      for (int c = 0; c < kClusters; ++c) {
        centres(c, 0) = rng.uniform(-3.0, 3.0);
        centres(c, 1) = rng.uniform(-1.5, 1.5);
        weight[c] = rng.uniform(0.5, 2.0);
        spread[c] = rng.uniform(0.2, 0.6);
        total += weight[c];
      }
      for (int i = 0; i < n; ++i) {
        double pick = rng.uniform(0.0, total);
        int c = 0;
        while (c + 1 < kClusters && pick > weight[c]) pick -= weight[c++];
        x(i, 0) = centres(c, 0) + spread[c] * rng.normal();
        x(i, 1) = centres(c, 1) + spread[c] * rng.normal();
      }
      break;
    }
  }
  return Configuration::centered(x);
}

// One confidence-set construction under evaluation.
struct MethodSpec {
  enum class Kind { Plugin, Oracle, Multiplier, Empirical };
  Kind kind = Kind::Plugin;
  MultiplierFamily family = MultiplierFamily::Gaussian;

  static MethodSpec plugin() { return {Kind::Plugin, MultiplierFamily::Gaussian}; }
  static MethodSpec oracle() { return {Kind::Oracle, MultiplierFamily::Gaussian}; }
  static MethodSpec multiplier(MultiplierFamily f = MultiplierFamily::Gaussian) { return {Kind::Multiplier, f}; }
  static MethodSpec empirical() { return {Kind::Empirical, MultiplierFamily::Gaussian}; }

  bool is_bootstrap() const { return kind == Kind::Multiplier || kind == Kind::Empirical; }

  std::string label() const {
    switch (kind) {
      case Kind::Plugin: return "plugin";
      case Kind::Oracle: return "oracle";
      case Kind::Multiplier: return std::string("multiplier:") + to_string(family);
      case Kind::Empirical: return "empirical";
    }
    return "unknown";
  }

  BootstrapMethod bootstrap() const {
    return kind == Kind::Empirical ? BootstrapMethod::empirical() : BootstrapMethod::multiplier(family);
  }

  bool operator==(const MethodSpec& o) const {
    return kind == o.kind && (kind != Kind::Multiplier || family == o.family);
  }
};

// "plugin", "oracle", "empirical", "multiplier" or "multiplier:<family>".
inline MethodSpec parse_method(const std::string& s, MultiplierFamily default_family = MultiplierFamily::Gaussian) {
  if (s == "plugin" || s == "gumbel") return MethodSpec::plugin();
  if (s == "oracle") return MethodSpec::oracle();
  if (s == "empirical") return MethodSpec::empirical();
  if (s == "multiplier") return MethodSpec::multiplier(default_family);
  const std::string prefix = "multiplier:";
  if (s.rfind(prefix, 0) == 0) return MethodSpec::multiplier(parse_multiplier_family(s.substr(prefix.size())));
  throw Error(ErrorKind::Usage, "unknown method '" + s + "'");
}

struct TrialOptions {
  double ridge = 0.0;  // added to every Omega_hat_i before whitening
  EmbedOptions embed;
  BootstrapOptions bootstrap;
};

// Outcome of one method in one trial, at every requested level.
struct MethodOutcome {
  bool failed = false;
  std::string failure;          // error text when failed
  double statistic = 0.0;       // max_i sqrt(n) ||W_i (g_hat(x_i) - x_hat_i)||
  std::vector<double> radius;   // per alpha
  std::vector<bool> hit;        // per alpha
  int bootstrap_failed = 0;     // dropped replicates
};

struct TrialRecord {
  bool failed = false;  // data could not be embedded
  std::string failure;
  std::vector<MethodOutcome> methods;
  std::vector<Warning> warnings;
};

namespace detail {

inline bool is_trial_failure(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonEuclideanRank:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::SingularGram:
    case ErrorKind::DegenerateResiduals:
    case ErrorKind::ReplicateBudget:
    case ErrorKind::NonConvergence:
      return true;
    default:
      return false;
  }
}

inline bool set_contains(const Matrix& aligned, const Embedding& e, const SandwichCovariances& shapes, double radius,
                         double alpha, SetMethod sm) {
  try {
    return make_confidence_set(e.coords, shapes, radius, alpha, sm).contains_all(aligned);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::EmptySet) return false;
    throw;
  }
}

}  // namespace detail

// Draws D = Delta(X) + E, embeds it, builds every method's set at every level
// and checks whether g_hat(X) lies inside. `rng` drives the noise; bootstrap
// methods use seeds derived from it, one per method index.
inline TrialRecord evaluate_trial(const Configuration& x_true, const NoiseSpec& spec,
                                  const std::vector<MethodSpec>& methods, const std::vector<double>& alphas, int B,
                                  SeededRng& rng, const TrialOptions& opt = {}) {
  if (!x_true.is_centered) throw Error(ErrorKind::Usage, "coverage trial needs a centered configuration");
  const int p = static_cast<int>(x_true.p());
  const SymmetricMatrix delta = squared_distance_matrix(x_true);
  const SymmetricMatrix d = noisy_dissimilarities(delta, spec, rng);
  std::vector<std::uint64_t> seeds(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) seeds[m] = rng.child(m + 1).engine()();

  TrialRecord rec;
  rec.methods.resize(methods.size());
  Embedding e;
  TruthAlignment align;
  ResidualMatrix r;
  try {
    e = mds_embed(d, p, opt.embed);
    align = align_truth_to_embedding(x_true, e);
    r = residuals(d, e);
  } catch (const Error& err) {
    if (!detail::is_trial_failure(err.kind())) throw;
    rec.failed = true;
    rec.failure = err.what();
    return rec;
  }
  rec.warnings = e.warnings;

  std::optional<SandwichCovariances> plugin;
  auto plugin_cov = [&]() -> const SandwichCovariances& {
    if (!plugin) {
      plugin = omega_plugin(e, r);
      if (opt.ridge > 0.0) plugin = apply_ridge(*plugin, opt.ridge);
    }
    return *plugin;
  };

  for (std::size_t m = 0; m < methods.size(); ++m) {
    const MethodSpec& method = methods[m];
    MethodOutcome& out = rec.methods[m];
    try {
      SandwichCovariances shapes;
      SetMethod sm = SetMethod::PluginGumbel;
      std::vector<double> radius(alphas.size());
      switch (method.kind) {
        case MethodSpec::Kind::Plugin:
          shapes = plugin_cov();
          for (std::size_t a = 0; a < alphas.size(); ++a) radius[a] = gumbel_radius(e.n(), p, alphas[a]);
          break;
        case MethodSpec::Kind::Oracle:
          shapes = conjugate(omega_oracle(x_true, variance_oracle(delta, spec)), align.rotation.matrix);
          if (opt.ridge > 0.0) shapes = apply_ridge(shapes, opt.ridge);
          sm = SetMethod::OracleGumbel;
          for (std::size_t a = 0; a < alphas.size(); ++a) radius[a] = gumbel_radius(e.n(), p, alphas[a]);
          break;
        case MethodSpec::Kind::Multiplier:
        case MethodSpec::Kind::Empirical: {
          const BootstrapMethod bm = method.bootstrap();
          sm = method.kind == MethodSpec::Kind::Empirical ? SetMethod::Empirical : SetMethod::Multiplier;
          shapes = bootstrap_shapes(e, r, method.kind == MethodSpec::Kind::Empirical ? SandwichCovariances{}
                                                                                     : plugin_cov(), bm);
          const BootstrapRun run = bootstrap_statistics(e, r, shapes, bm, B, seeds[m], opt.bootstrap);
          out.bootstrap_failed = run.failed;
          for (std::size_t a = 0; a < alphas.size(); ++a) radius[a] = empirical_quantile(run.statistics, alphas[a]);
          break;
        }
      }
      out.statistic = max_whitened_deviation(align.aligned, e.coords, whiteners(shapes));
      out.radius = radius;
      out.hit.resize(alphas.size());
      for (std::size_t a = 0; a < alphas.size(); ++a)
        out.hit[a] = detail::set_contains(align.aligned, e, shapes, radius[a], alphas[a], sm);
    } catch (const Error& err) {
      if (!detail::is_trial_failure(err.kind())) throw;
      out = MethodOutcome{};
      out.failed = true;
      out.failure = err.what();
    }
  }
  return rec;
}

struct TrialResult {
  bool hit = false;
  double statistic = 0.0;
  double radius = 0.0;
  std::vector<Warning> warnings;
};

// Single method, single level. Failures propagate as errors.
inline TrialResult coverage_trial(const Configuration& x_true, const NoiseSpec& spec, const MethodSpec& method,
                                  double alpha, int B, SeededRng& rng, const TrialOptions& opt = {}) {
  const TrialRecord rec = evaluate_trial(x_true, spec, {method}, {alpha}, B, rng, opt);
  if (rec.failed) throw Error(ErrorKind::NonEuclideanRank, rec.failure);
  const MethodOutcome& m = rec.methods.front();
  if (m.failed) throw Error(ErrorKind::NotPositiveDefinite, m.failure);
  return {m.hit.front(), m.statistic, m.radius.front(), rec.warnings};
}

struct CoverageCell {
  std::string method;
  std::string noise;
  double nominal = 0.0;  // 1 - alpha
  int trials = 0;        // trials that produced a set
  int hits = 0;
  int failed = 0;        // trials excluded because the method could not be run
  double coverage = 0.0;
  double se = 0.0;       // sqrt(c (1 - c) / trials)

  bool operator==(const CoverageCell&) const = default;
};

// Tallies per-trial outcomes; nullopt marks a failed trial.
inline CoverageCell tally(const std::string& method, const std::string& noise, double nominal,
                          const std::vector<std::optional<bool>>& outcomes) {
  CoverageCell c;
  c.method = method;
  c.noise = noise;
  c.nominal = nominal;
  for (const auto& o : outcomes) {
    if (!o) {
      ++c.failed;
      continue;
    }
    ++c.trials;
    if (*o) ++c.hits;
  }
  if (c.trials > 0) {
    c.coverage = static_cast<double>(c.hits) / c.trials;
    c.se = std::sqrt(c.coverage * (1.0 - c.coverage) / c.trials);
  }
  return c;
}

enum class ExperimentKind { Coverage, GumbelKS };

inline const char* to_string(ExperimentKind k) { return k == ExperimentKind::Coverage ? "coverage" : "ks"; }

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "coverage") return ExperimentKind::Coverage;
  if (s == "ks") return ExperimentKind::GumbelKS;
  throw Error(ErrorKind::Usage, "unknown experiment kind '" + s + "'");
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Coverage;
  int n = 300;
  int p = 2;
  NoiseSpec noise;
  std::vector<MethodSpec> methods{MethodSpec::multiplier()};
  MultiplierFamily multiplier = MultiplierFamily::Gaussian;
  std::vector<double> alphas{0.05};
  int B = 1000;
  int trials = 100;
  std::uint64_t master_seed = 0;
  LatentKind latent = LatentKind::Ellipse;
  bool fixed_latent = true;  // one configuration for all trials, else a fresh draw per trial
  double ridge = 0.0;
  // KS experiments only: bootstrap sample size for the comparison against
  // the Monte Carlo law (0 skips it).
  int ks_bootstrap_B = 0;
  std::string output_csv;
  std::string output_json;

  bool operator==(const ExperimentConfig& o) const {
    return kind == o.kind && n == o.n && p == o.p && noise.kind == o.noise.kind && noise.sigma == o.noise.sigma &&
           noise.mean_correct == o.noise.mean_correct && methods == o.methods && multiplier == o.multiplier &&
           alphas == o.alphas && B == o.B && trials == o.trials && master_seed == o.master_seed &&
           latent == o.latent && fixed_latent == o.fixed_latent && ridge == o.ridge &&
           ks_bootstrap_B == o.ks_bootstrap_B && output_csv == o.output_csv && output_json == o.output_json;
  }
};

// Every violated constraint, one message each.
inline std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> v;
  if (c.n < 3) v.push_back("n must be at least 3");
  if (c.p < 1) v.push_back("p must be positive");
  if (c.p >= c.n) v.push_back("p must be smaller than n");
  if (!latent_supports_dimension(c.latent, c.p))
    v.push_back(std::string("latent generator '") + to_string(c.latent) + "' does not support this p");
  if (c.trials < 1) v.push_back("trials must be positive");
  if (!(c.noise.sigma >= 0.0) || !std::isfinite(c.noise.sigma)) v.push_back("noise sigma must be finite and >= 0");
  if (!(c.ridge >= 0.0)) v.push_back("ridge must be >= 0");
  if (c.kind == ExperimentKind::Coverage) {
    if (c.methods.empty()) v.push_back("methods must not be empty");
    if (c.alphas.empty()) v.push_back("alphas must not be empty");
    const bool needs_b =
        std::any_of(c.methods.begin(), c.methods.end(), [](const MethodSpec& m) { return m.is_bootstrap(); });
    if (needs_b && c.B < 1) v.push_back("B must be positive for bootstrap methods");
  }
  for (double a : c.alphas)
    if (!(a > 0.0 && a < 1.0)) {
      std::ostringstream os;
      os << "alpha " << a << " is outside (0, 1)";
      v.push_back(os.str());
    }
  if (c.ks_bootstrap_B < 0) v.push_back("ks_bootstrap_B must be >= 0");
  return v;
}

inline void require_valid(const ExperimentConfig& c) {
  const auto v = validate(c);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid experiment configuration:";
  for (const auto& m : v) os << "\n  - " << m;
  throw Error(ErrorKind::Usage, os.str());
}

struct ExperimentMetadata {
  int n = 0;
  int p = 0;
  int B = 0;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::string latent;
  bool fixed_latent = true;
  std::string noise;
  double sigma = 0.0;

  bool operator==(const ExperimentMetadata&) const = default;
};

struct CoverageReport {
  std::vector<CoverageCell> cells;
  ExperimentMetadata metadata;
  int failed_trials = 0;  // embedding failures, excluded from every cell

  const CoverageCell* find(const std::string& method, double nominal) const {
    for (const auto& c : cells)
      if (c.method == method && std::abs(c.nominal - nominal) < 1e-12) return &c;
    return nullptr;
  }

  bool operator==(const CoverageReport&) const = default;
};

struct KSReport {
  std::vector<double> sample;  // (T_hat_n - b_n) / a_n per successful trial
  double ks_distance = 0.0;    // against the Gumbel CDF
  std::string reference = "gumbel";
  double b_n = 0.0;
  double a_n = 0.0;
  int failed_trials = 0;
  // Present when a bootstrap comparison was requested.
  std::vector<double> bootstrap_sample;  // (T^(b) - b_n) / a_n
  std::optional<double> ks_bootstrap_vs_mc;
  std::optional<double> ks_bootstrap_to_gumbel;
  ExperimentMetadata metadata;

  bool operator==(const KSReport&) const = default;
};

inline ExperimentMetadata metadata_of(const ExperimentConfig& c) {
  return {c.n, c.p, c.B, c.trials, c.master_seed, to_string(c.latent), c.fixed_latent, to_string(c.noise.kind),
          c.noise.sigma};
}

namespace detail {

// Latent stream 0 for a fixed configuration; trial t uses stream t + 1.
inline Configuration trial_latent(const ExperimentConfig& c, const std::optional<Configuration>& fixed,
                                  SeededRng& trial_rng) {
  if (fixed) return *fixed;
  SeededRng latent_rng = trial_rng.child(0);
  return generate_latent(c.latent, c.n, c.p, latent_rng);
}

inline std::optional<Configuration> fixed_latent(const ExperimentConfig& c) {
  if (!c.fixed_latent) return std::nullopt;
  SeededRng rng = SeededRng(c.master_seed, 0).child(0);
  return generate_latent(c.latent, c.n, c.p, rng);
}

}  // namespace detail

// Coverage grid over methods x levels. Trials run in parallel; results depend
// only on the master seed.
inline CoverageReport run_coverage(const ExperimentConfig& c, int threads = 1, const TrialOptions& base = {}) {
  require_valid(c);
  const auto fixed = detail::fixed_latent(c);
  TrialOptions opt = base;
  opt.ridge = c.ridge;
  opt.bootstrap.threads = 1;
  std::vector<TrialRecord> records(static_cast<std::size_t>(c.trials));
  parallel_for(records.size(), threads, [&](std::size_t t) {
    SeededRng rng(c.master_seed, t + 1);
    const Configuration x = detail::trial_latent(c, fixed, rng);
    records[t] = evaluate_trial(x, c.noise, c.methods, c.alphas, c.B, rng, opt);
  });

  CoverageReport rep;
  rep.metadata = metadata_of(c);
  for (const auto& r : records)
    if (r.failed) ++rep.failed_trials;
  for (std::size_t m = 0; m < c.methods.size(); ++m)
    for (std::size_t a = 0; a < c.alphas.size(); ++a) {
      std::vector<std::optional<bool>> outcomes;
      outcomes.reserve(records.size());
      for (const auto& r : records) {
        if (r.failed || r.methods[m].failed) outcomes.emplace_back(std::nullopt);
        else outcomes.emplace_back(r.methods[m].hit[a]);
      }
      rep.cells.push_back(tally(c.methods[m].label(), to_string(c.noise.kind), 1.0 - c.alphas[a], outcomes));
    }
  return rep;
}

// Monte Carlo law of (T_hat_n - b_n) / a_n with plug-in whitening, and
// optionally the multiplier-bootstrap law on the dataset of stream 0.
inline KSReport run_gumbel_ks(const ExperimentConfig& c, int threads = 1, const TrialOptions& base = {}) {
  require_valid(c);
  const auto fixed = detail::fixed_latent(c);
  const GumbelNormalization g = gumbel_normalization(c.n, c.p);
  std::vector<std::optional<double>> stats(static_cast<std::size_t>(c.trials));
  parallel_for(stats.size(), threads, [&](std::size_t t) {
    SeededRng rng(c.master_seed, t + 1);
    const Configuration x = detail::trial_latent(c, fixed, rng);
    const SymmetricMatrix d = noisy_dissimilarities(squared_distance_matrix(x), c.noise, rng);
    try {
      const Embedding e = mds_embed(d, c.p, base.embed);
      const TruthAlignment al = align_truth_to_embedding(x, e);
      SandwichCovariances om = omega_plugin(e, residuals(d, e));
      if (c.ridge > 0.0) om = apply_ridge(om, c.ridge);
      stats[t] = (statistic_T(al.aligned, e, om) - g.b_n) / g.a_n;
    } catch (const Error& err) {
      if (!detail::is_trial_failure(err.kind())) throw;
    }
  });

  KSReport rep;
  rep.metadata = metadata_of(c);
  rep.b_n = g.b_n;
  rep.a_n = g.a_n;
  for (const auto& s : stats) {
    if (s) rep.sample.push_back(*s);
    else ++rep.failed_trials;
  }
  if (rep.sample.empty()) throw Error(ErrorKind::NonEuclideanRank, "every Monte Carlo trial failed");
  rep.ks_distance = ks_distance_to_gumbel(rep.sample);

  if (c.ks_bootstrap_B > 0) {
    SeededRng rng = SeededRng(c.master_seed, 0).child(1);
    const Configuration x = fixed ? *fixed : generate_latent(c.latent, c.n, c.p, rng);
    const SymmetricMatrix d = noisy_dissimilarities(squared_distance_matrix(x), c.noise, rng);
    const Embedding e = mds_embed(d, c.p, base.embed);
    const ResidualMatrix r = residuals(d, e);
    SandwichCovariances om = omega_plugin(e, r);
    if (c.ridge > 0.0) om = apply_ridge(om, c.ridge);
    BootstrapOptions bo = base.bootstrap;
    bo.threads = threads;
    const BootstrapRun run = bootstrap_statistics(e, r, om, BootstrapMethod::multiplier(c.multiplier),
                                                  c.ks_bootstrap_B, rng.child(2).engine()(), bo);
    for (double s : run.statistics) rep.bootstrap_sample.push_back((s - g.b_n) / g.a_n);
    rep.ks_bootstrap_vs_mc = ks_two_sample(rep.bootstrap_sample, rep.sample);
    rep.ks_bootstrap_to_gumbel = ks_distance_to_gumbel(rep.bootstrap_sample);
  }
  return rep;
}

}  // namespace noisy_mds
