#pragma once

// Command-line front end: embed, confset, coverage (alias simulate).

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "noisy_mds/bootstrap.hpp"
#include "noisy_mds/error.hpp"
#include "noisy_mds/evaluation.hpp"
#include "noisy_mds/inference.hpp"
#include "noisy_mds/io.hpp"
#include "noisy_mds/mds.hpp"
#include "noisy_mds/noise.hpp"
#include "noisy_mds/parallel.hpp"
#include "noisy_mds/rng.hpp"

namespace noisy_mds::cli {

// Input options shared by embed and confset.
struct InputOptions {
  std::string path;
  int p = 2;
  bool from_coords = false;
  std::string noise = "additive";
  double sigma = 0.0;
  std::optional<std::uint64_t> seed;
  double asym_tol = 1e-9;
};

struct LoadedInput {
  SymmetricMatrix d;
  std::uint64_t seed = 0;
  bool used_seed = false;
};

inline void add_input_options(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("input", in.path, "dissimilarity CSV (n x n), or coordinates with --from-coords")->required();
  cmd.add_option("-p,--dim", in.p, "embedding dimension")->default_val(2);
  cmd.add_flag("--from-coords", in.from_coords, "input holds n x p coordinates; Delta(.) is applied");
  cmd.add_option("--noise", in.noise, "noise added to coordinates input: additive|multiplicative|lognormal")
      ->default_val("additive");
  cmd.add_option("--sigma", in.sigma, "noise scale for --from-coords (0 disables)")->default_val(0.0);
  cmd.add_option("--seed", in.seed, "master seed; drawn from entropy and recorded when absent");
  cmd.add_option("--asym-tol", in.asym_tol, "largest |d_ij - d_ji| symmetrized by averaging")->default_val(1e-9);
}

inline LoadedInput load_input(const InputOptions& in, bool randomized) {
  LoadedInput out;
  out.used_seed = randomized || (in.from_coords && in.sigma > 0.0);
  if (out.used_seed) out.seed = in.seed ? *in.seed : entropy_seed();
  if (!in.from_coords) {
    if (in.sigma != 0.0) throw Error(ErrorKind::Usage, "--sigma requires --from-coords");
    out.d = read_dissimilarities(in.path, in.asym_tol);
    return out;
  }
  const Matrix x = read_matrix_csv(in.path);
  out.d = squared_distance_matrix(x);
  if (in.sigma > 0.0) {
    NoiseSpec spec{parse_noise_kind(in.noise), in.sigma, false};
    SeededRng rng = SeededRng(out.seed, 0).child(0);
    out.d = noisy_dissimilarities(out.d, spec, rng);
  } else if (in.sigma < 0.0) {
    throw Error(ErrorKind::Usage, "--sigma must be nonnegative");
  }
  return out;
}

inline void emit(const std::string& path, const json& j, std::ostream& out) {
  if (path.empty() || path == "-") out << j.dump(2) << "\n";
  else write_json(path, j);
}

inline Embedding embed_with_hint(const SymmetricMatrix& d, int p) {
  try {
    return mds_embed(d, p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonEuclideanRank) throw;
    throw Error(ErrorKind::NonEuclideanRank,
                std::string(e.what()) +
                    ". Hint: the input must hold squared distances; try a smaller -p or check for large negative noise.");
  }
}

inline int cmd_embed(const InputOptions& in, const std::string& output, std::ostream& out) {
  const LoadedInput data = load_input(in, false);
  const Embedding e = embed_with_hint(data.d, in.p);
  json j = to_json(e);
  if (data.used_seed) j["seed"] = data.seed;
  emit(output, j, out);
  return 0;
}

struct ConfsetOptions {
  std::string method = "multiplier";
  double alpha = 0.1;
  int B = 1000;
  std::string multiplier = "gaussian";
  int threads = 0;
  double ridge = 0.0;
  std::string output;
  std::string ellipses;
};

// max_i tr(Omega_i) / min_i tr(Omega_i).
inline double trace_ratio(const SandwichCovariances& c) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& m : c.per_point) {
    lo = std::min(lo, m.trace());
    hi = std::max(hi, m.trace());
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

inline int cmd_confset(const InputOptions& in, const ConfsetOptions& opt, std::ostream& out) {
  const bool bootstrap = opt.method == "multiplier" || opt.method == "empirical";
  if (!bootstrap && opt.method != "plugin")
    throw Error(ErrorKind::Usage, "--method must be plugin, multiplier or empirical");
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw Error(ErrorKind::Usage, "--alpha must lie in (0, 1)");
  if (bootstrap && opt.B < 1) throw Error(ErrorKind::Usage, "--B must be positive");
  const LoadedInput data = load_input(in, bootstrap);
  const Embedding e = embed_with_hint(data.d, in.p);
  const ResidualMatrix r = residuals(data.d, e);
  SandwichCovariances om = omega_plugin(e, r);
  if (opt.ridge > 0.0) om = apply_ridge(om, opt.ridge);

  std::vector<Warning> warnings = e.warnings;
  json j;
  if (!bootstrap) {
    j["confidence_set"] = to_json(plugin_confidence_set(e, om, opt.alpha));
  } else {
    const BootstrapMethod bm = opt.method == "empirical"
                                   ? BootstrapMethod::empirical()
                                   : BootstrapMethod::multiplier(parse_multiplier_family(opt.multiplier));
    if (bm.kind == BootstrapMethod::Kind::Empirical) {
      const double ratio = trace_ratio(om);
      if (ratio > 10.0) {
        std::ostringstream os;
        os << "plug-in covariances vary strongly across points (max/min trace ratio " << ratio
           << "); the empirical bootstrap assumes homoscedastic noise and tends to over-cover here";
        warnings.push_back({"heteroscedastic_residuals", os.str()});
      }
    }
    BootstrapOptions bo;
    bo.threads = opt.threads > 0 ? opt.threads : default_threads();
    const BootstrapResult res = run_bootstrap(e, r, om, bm, opt.B, opt.alpha, data.seed, bo);
    j["confidence_set"] = to_json(res.set);
    j["bootstrap"] = to_json(res.run);
    if (!opt.ellipses.empty() && e.p() == 2) write_json(opt.ellipses, to_json(export_ellipsoids(res.set)));
  }
  if (!bootstrap && !opt.ellipses.empty() && e.p() == 2)
    write_json(opt.ellipses, to_json(export_ellipsoids(plugin_confidence_set(e, om, opt.alpha))));
  if (data.used_seed) j["seed"] = data.seed;
  j["diagnostics"] = {{"warnings", warnings_to_json(warnings)}};
  emit(opt.output, j, out);
  return 0;
}

inline int cmd_coverage(const std::string& config_path, std::optional<std::uint64_t> seed, int threads,
                        std::ostream& out) {
  json j = read_json(config_path);
  if (seed) j["master_seed"] = *seed;
  else if (j.is_object() && !j.contains("master_seed")) j["master_seed"] = entropy_seed();
  const ExperimentConfig c = experiment_config_from_json(j);
  const int t = threads > 0 ? threads : default_threads();
  json report;
  if (c.kind == ExperimentKind::Coverage) {
    const CoverageReport rep = run_coverage(c, t);
    report = to_json(rep);
    if (!c.output_csv.empty()) {
      std::ofstream csv(c.output_csv);
      if (!csv) throw Error(ErrorKind::Usage, "cannot write '" + c.output_csv + "'");
      write_coverage_csv(csv, rep);
    } else {
      write_coverage_csv(out, rep);
    }
  } else {
    report = to_json(run_gumbel_ks(c, t));
  }
  report["config"] = to_json(c);
  emit(c.output_json, report, out);
  return 0;
}

// Parses argv and runs one command. Errors are reported on `err` and mapped
// to exit codes.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Classical MDS with uniform confidence sets"};
  app.require_subcommand(1);

  InputOptions embed_in;
  std::string embed_out;
  auto* embed = app.add_subcommand("embed", "embed a dissimilarity matrix");
  add_input_options(*embed, embed_in);
  embed->add_option("-o,--output", embed_out, "embedding JSON (stdout when absent)");

  InputOptions conf_in;
  ConfsetOptions conf;
  auto* confset = app.add_subcommand("confset", "uniform confidence set for the latent configuration");
  add_input_options(*confset, conf_in);
  confset->add_option("--method", conf.method, "plugin|multiplier|empirical")->default_val("multiplier");
  confset->add_option("--alpha", conf.alpha, "nominal level alpha")->default_val(0.1);
  confset->add_option("--B", conf.B, "bootstrap replicates")->default_val(1000);
  confset->add_option("--multiplier", conf.multiplier, "gaussian|rademacher|uniform")->default_val("gaussian");
  confset->add_option("--threads", conf.threads, "worker threads (NOISY_MDS_THREADS when absent)");
  confset->add_option("--ridge", conf.ridge, "ridge added to each covariance, relative to its trace")
      ->default_val(0.0);
  confset->add_option("-o,--output", conf.output, "confidence-set JSON (stdout when absent)");
  confset->add_option("--ellipses", conf.ellipses, "ellipse boundary export JSON (p = 2)");

  std::string config_path;
  std::optional<std::uint64_t> cov_seed;
  int cov_threads = 0;
  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage or Gumbel-KS experiment");
  coverage->alias("simulate");
  coverage->add_option("config", config_path, "experiment configuration JSON")->required();
  coverage->add_option("--seed", cov_seed, "overrides master_seed in the configuration");
  coverage->add_option("--threads", cov_threads, "worker threads (NOISY_MDS_THREADS when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*embed) return cmd_embed(embed_in, embed_out, out);
    if (*confset) return cmd_confset(conf_in, conf, out);
    if (*coverage) return cmd_coverage(config_path, cov_seed, cov_threads, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace noisy_mds::cli
