#pragma once

// File formats: matrix CSV, JSON artifacts, experiment configs, and the
// ellipse-boundary export used for plotting.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "noisy_mds/bootstrap.hpp"
#include "noisy_mds/error.hpp"
#include "noisy_mds/evaluation.hpp"
#include "noisy_mds/inference.hpp"
#include "noisy_mds/linalg.hpp"
#include "noisy_mds/mds.hpp"
#include "noisy_mds/noise.hpp"

namespace noisy_mds {

using json = nlohmann::json;

// ---- CSV ------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  try {
    std::size_t used = 0;
    v = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace detail

// Plain comma-separated numbers. A first row with any non-numeric cell is
// taken as a header and skipped. Blank lines are ignored.
inline Matrix read_matrix_csv(std::istream& in, const std::string& source = "<input>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    std::vector<double> row(cells.size());
    int bad_col = -1;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!detail::parse_double(cells[c], row[c])) {
        bad_col = static_cast<int>(c);
        break;
      }
    if (first) {
      first = false;
      if (bad_col >= 0) {
        width = cells.size();
        continue;
      }
    }
    if (bad_col >= 0) {
      std::ostringstream os;
      os << source << ":" << lineno << ":" << bad_col + 1 << ": cannot parse '" << cells[bad_col] << "' as a number";
      throw Error(ErrorKind::DataFormat, os.str());
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      std::ostringstream os;
      os << source << ":" << lineno << ": expected " << width << " columns, found " << row.size();
      throw Error(ErrorKind::DataFormat, os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::DataFormat, source + ": no numeric rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::DataFormat, "cannot open '" + path + "'");
  return read_matrix_csv(in, path);
}

inline void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << "\n";
  }
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Usage, "cannot write '" + path + "'");
  write_matrix_csv(out, m);
}

// Square matrix, symmetrized by averaging when the asymmetry is within
// `asym_tol`; otherwise an error naming the worst pair.
inline SymmetricMatrix read_dissimilarities(const std::string& path, double asym_tol = 1e-9) {
  Matrix m = read_matrix_csv(path);
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << path << ": dissimilarity matrix must be square, got " << m.rows() << " x " << m.cols();
    throw Error(ErrorKind::DataFormat, os.str());
  }
  check_symmetric(m, asym_tol);
  return 0.5 * (m + m.transpose());
}

// ---- JSON: linear algebra -------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::DataFormat, "expected a matrix (array of rows)");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto p = n > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != p)
      throw Error(ErrorKind::DataFormat, "ragged matrix in JSON");
    for (Eigen::Index k = 0; k < p; ++k) m(i, k) = r[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

inline json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

inline Vector vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline json to_json(const Warning& w) { return {{"code", w.code}, {"message", w.message}}; }

inline Warning warning_from_json(const json& j) { return {j.at("code").get<std::string>(), j.at("message").get<std::string>()}; }

inline json warnings_to_json(const std::vector<Warning>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(to_json(w));
  return a;
}

inline std::vector<Warning> warnings_from_json(const json& j) {
  std::vector<Warning> out;
  for (const auto& w : j) out.push_back(warning_from_json(w));
  return out;
}

// ---- JSON: artifacts ------------------------------------------------------

inline json to_json(const Embedding& e) {
  return {{"coords", matrix_to_json(e.coords)},
          {"eigenvalues", vector_to_json(e.eigenvalues)},
          {"eigenvectors", matrix_to_json(e.eigenvectors)},
          {"diagnostics", {{"warnings", warnings_to_json(e.warnings)}}}};
}

inline Embedding embedding_from_json(const json& j) {
  Embedding e;
  e.coords = matrix_from_json(j.at("coords"));
  e.eigenvalues = vector_from_json(j.at("eigenvalues"));
  e.eigenvectors = matrix_from_json(j.at("eigenvectors"));
  if (j.contains("diagnostics")) e.warnings = warnings_from_json(j.at("diagnostics").at("warnings"));
  return e;
}

inline CovarianceSource parse_covariance_source(const std::string& s) {
  if (s == to_string(CovarianceSource::Oracle)) return CovarianceSource::Oracle;
  if (s == to_string(CovarianceSource::PlugIn)) return CovarianceSource::PlugIn;
  if (s == to_string(CovarianceSource::IIDSpherical)) return CovarianceSource::IIDSpherical;
  throw Error(ErrorKind::DataFormat, "unknown covariance source '" + s + "'");
}

inline json to_json(const SandwichCovariances& c) {
  json mats = json::array();
  for (const auto& m : c.per_point) mats.push_back(matrix_to_json(m));
  return {{"source", to_string(c.source)}, {"per_point", std::move(mats)}, {"positive_definite", c.positive_definite}};
}

inline SandwichCovariances covariances_from_json(const json& j) {
  SandwichCovariances c;
  c.source = parse_covariance_source(j.at("source").get<std::string>());
  for (const auto& m : j.at("per_point")) c.per_point.push_back(matrix_from_json(m));
  c.positive_definite = j.at("positive_definite").get<std::vector<bool>>();
  return c;
}

inline SetMethod parse_set_method(const std::string& s) {
  for (SetMethod m : {SetMethod::PluginGumbel, SetMethod::OracleGumbel, SetMethod::Multiplier, SetMethod::Empirical})
    if (s == to_string(m)) return m;
  throw Error(ErrorKind::DataFormat, "unknown set method '" + s + "'");
}

inline json to_json(const ConfidenceSet& s) {
  return {{"method", to_string(s.method)},
          {"alpha", s.alpha},
          {"radius", s.radius},
          {"centers", matrix_to_json(s.centers)},
          {"shapes", to_json(s.shapes)}};
}

// The whitening matrices are derived data and are recomputed from the shapes.
inline ConfidenceSet confidence_set_from_json(const json& j) {
  return make_confidence_set(matrix_from_json(j.at("centers")), covariances_from_json(j.at("shapes")),
                             j.at("radius").get<double>(), j.at("alpha").get<double>(),
                             parse_set_method(j.at("method").get<std::string>()));
}

inline BootstrapMethod bootstrap_method_from_label(const std::string& s) {
  if (s == "empirical") return BootstrapMethod::empirical();
  const std::string prefix = "multiplier:";
  if (s.rfind(prefix, 0) == 0) return BootstrapMethod::multiplier(parse_multiplier_family(s.substr(prefix.size())));
  throw Error(ErrorKind::DataFormat, "unknown bootstrap method '" + s + "'");
}

inline json to_json(const BootstrapRun& r) {
  return {{"method", r.method.label()},
          {"B", r.B},
          {"failed", r.failed},
          {"master_seed", r.master_seed},
          {"quantile_alpha", r.quantile_alpha},
          {"quantile_value", r.quantile_value},
          {"statistics", r.statistics}};
}

inline BootstrapRun bootstrap_run_from_json(const json& j) {
  BootstrapRun r;
  r.method = bootstrap_method_from_label(j.at("method").get<std::string>());
  r.B = j.at("B").get<int>();
  r.failed = j.at("failed").get<int>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.quantile_alpha = j.at("quantile_alpha").get<double>();
  r.quantile_value = j.at("quantile_value").get<double>();
  r.statistics = j.at("statistics").get<std::vector<double>>();
  return r;
}

inline json to_json(const DiagnosticsReport& d) {
  json j = {{"max_point_norm", d.max_point_norm},
            {"scaled_singular_values", vector_to_json(d.scaled_singular_values)},
            {"kappa", d.kappa},
            {"min_relative_gap", d.min_relative_gap},
            {"min_noise_eigenvalue", d.min_noise_eigenvalue},
            {"max_variance", d.max_variance},
            {"rows_with_few_observations", d.rows_with_few_observations},
            {"noise_lower_bound_violated", d.noise_lower_bound_violated},
            {"warnings", warnings_to_json(d.warnings)}};
  j["max_abs_noise"] = d.max_abs_noise ? json(*d.max_abs_noise) : json(nullptr);
  j["negative_dissimilarities"] = d.negative_dissimilarities ? json(*d.negative_dissimilarities) : json(nullptr);
  return j;
}

inline DiagnosticsReport diagnostics_from_json(const json& j) {
  DiagnosticsReport d;
  d.max_point_norm = j.at("max_point_norm").get<double>();
  d.scaled_singular_values = vector_from_json(j.at("scaled_singular_values"));
  d.kappa = j.at("kappa").get<double>();
  d.min_relative_gap = j.at("min_relative_gap").get<double>();
  d.min_noise_eigenvalue = j.at("min_noise_eigenvalue").get<double>();
  d.max_variance = j.at("max_variance").get<double>();
  d.rows_with_few_observations = j.at("rows_with_few_observations").get<std::vector<int>>();
  d.noise_lower_bound_violated = j.at("noise_lower_bound_violated").get<bool>();
  d.warnings = warnings_from_json(j.at("warnings"));
  if (!j.at("max_abs_noise").is_null()) d.max_abs_noise = j.at("max_abs_noise").get<double>();
  if (!j.at("negative_dissimilarities").is_null())
    d.negative_dissimilarities = j.at("negative_dissimilarities").get<int>();
  return d;
}

inline json to_json(const ExperimentMetadata& m) {
  return {{"n", m.n},           {"p", m.p},
          {"B", m.B},           {"trials", m.trials},
          {"master_seed", m.master_seed}, {"latent", m.latent},
          {"fixed_latent", m.fixed_latent}, {"noise", m.noise},
          {"sigma", m.sigma}};
}

inline ExperimentMetadata metadata_from_json(const json& j) {
  ExperimentMetadata m;
  m.n = j.at("n").get<int>();
  m.p = j.at("p").get<int>();
  m.B = j.at("B").get<int>();
  m.trials = j.at("trials").get<int>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.latent = j.at("latent").get<std::string>();
  m.fixed_latent = j.at("fixed_latent").get<bool>();
  m.noise = j.at("noise").get<std::string>();
  m.sigma = j.at("sigma").get<double>();
  return m;
}

inline json to_json(const CoverageCell& c) {
  return {{"method", c.method}, {"noise", c.noise},       {"nominal", c.nominal}, {"trials", c.trials},
          {"hits", c.hits},     {"failed", c.failed},     {"coverage", c.coverage}, {"se", c.se}};
}

inline CoverageCell coverage_cell_from_json(const json& j) {
  CoverageCell c;
  c.method = j.at("method").get<std::string>();
  c.noise = j.at("noise").get<std::string>();
  c.nominal = j.at("nominal").get<double>();
  c.trials = j.at("trials").get<int>();
  c.hits = j.at("hits").get<int>();
  c.failed = j.at("failed").get<int>();
  c.coverage = j.at("coverage").get<double>();
  c.se = j.at("se").get<double>();
  return c;
}

inline json to_json(const CoverageReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  return {{"kind", "coverage"}, {"metadata", to_json(r.metadata)}, {"failed_trials", r.failed_trials},
          {"cells", std::move(cells)}};
}

inline CoverageReport coverage_report_from_json(const json& j) {
  CoverageReport r;
  r.metadata = metadata_from_json(j.at("metadata"));
  r.failed_trials = j.at("failed_trials").get<int>();
  for (const auto& c : j.at("cells")) r.cells.push_back(coverage_cell_from_json(c));
  return r;
}

inline json to_json(const KSReport& r) {
  json j = {{"kind", "ks"},
            {"metadata", to_json(r.metadata)},
            {"reference", r.reference},
            {"b_n", r.b_n},
            {"a_n", r.a_n},
            {"failed_trials", r.failed_trials},
            {"ks_distance", r.ks_distance},
            {"sample", r.sample},
            {"bootstrap_sample", r.bootstrap_sample}};
  j["ks_bootstrap_vs_mc"] = r.ks_bootstrap_vs_mc ? json(*r.ks_bootstrap_vs_mc) : json(nullptr);
  j["ks_bootstrap_to_gumbel"] = r.ks_bootstrap_to_gumbel ? json(*r.ks_bootstrap_to_gumbel) : json(nullptr);
  return j;
}

inline KSReport ks_report_from_json(const json& j) {
  KSReport r;
  r.metadata = metadata_from_json(j.at("metadata"));
  r.reference = j.at("reference").get<std::string>();
  r.b_n = j.at("b_n").get<double>();
  r.a_n = j.at("a_n").get<double>();
  r.failed_trials = j.at("failed_trials").get<int>();
  r.ks_distance = j.at("ks_distance").get<double>();
  r.sample = j.at("sample").get<std::vector<double>>();
  r.bootstrap_sample = j.at("bootstrap_sample").get<std::vector<double>>();
  if (!j.at("ks_bootstrap_vs_mc").is_null()) r.ks_bootstrap_vs_mc = j.at("ks_bootstrap_vs_mc").get<double>();
  if (!j.at("ks_bootstrap_to_gumbel").is_null())
    r.ks_bootstrap_to_gumbel = j.at("ks_bootstrap_to_gumbel").get<double>();
  return r;
}

// ---- Experiment configuration --------------------------------------------

inline json to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (const auto& m : c.methods) methods.push_back(m.label());
  return {{"kind", to_string(c.kind)},
          {"n", c.n},
          {"p", c.p},
          {"noise", {{"kind", to_string(c.noise.kind)}, {"sigma", c.noise.sigma}, {"mean_correct", c.noise.mean_correct}}},
          {"methods", std::move(methods)},
          {"multiplier", to_string(c.multiplier)},
          {"alphas", c.alphas},
          {"B", c.B},
          {"trials", c.trials},
          {"master_seed", c.master_seed},
          {"latent", to_string(c.latent)},
          {"fixed_latent", c.fixed_latent},
          {"ridge", c.ridge},
          {"ks_bootstrap_B", c.ks_bootstrap_B},
          {"output_csv", c.output_csv},
          {"output_json", c.output_json}};
}

// Parses and validates. Unknown keys, wrong types and constraint violations
// are all collected and reported together.
inline ExperimentConfig experiment_config_from_json(const json& j) {
  std::vector<std::string> problems;
  ExperimentConfig c;
  if (!j.is_object()) throw Error(ErrorKind::Usage, "experiment configuration must be a JSON object");
  static const std::vector<std::string> known = {"kind",   "n",           "p",       "noise",          "methods",
                                                 "multiplier", "alphas",  "B",       "trials",         "master_seed",
                                                 "latent", "fixed_latent", "ridge", "ks_bootstrap_B", "output_csv",
                                                 "output_json"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) problems.push_back("unknown key '" + key + "'");

  auto field = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(target);
    } catch (const json::exception&) {
      problems.push_back(std::string("'") + key + "' has the wrong type");
    }
  };
  auto parsed = [&](const char* key, auto parse, auto& target) {
    if (!j.contains(key)) return;
    try {
      target = parse(j.at(key).get<std::string>());
    } catch (const json::exception&) {
      problems.push_back(std::string("'") + key + "' must be a string");
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  };

  parsed("kind", parse_experiment_kind, c.kind);
  field("n", c.n);
  field("p", c.p);
  field("B", c.B);
  field("trials", c.trials);
  field("alphas", c.alphas);
  field("fixed_latent", c.fixed_latent);
  field("ridge", c.ridge);
  field("ks_bootstrap_B", c.ks_bootstrap_B);
  field("output_csv", c.output_csv);
  field("output_json", c.output_json);
  if (j.contains("master_seed")) {
    if (j.at("master_seed").is_number_unsigned()) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    else problems.push_back("'master_seed' must be a nonnegative integer");
  }
  parsed("multiplier", parse_multiplier_family, c.multiplier);
  parsed("latent", parse_latent_kind, c.latent);
  if (j.contains("noise")) {
    const json& nz = j.at("noise");
    if (!nz.is_object()) {
      problems.push_back("'noise' must be an object");
    } else {
      try {
        if (nz.contains("kind")) c.noise.kind = parse_noise_kind(nz.at("kind").get<std::string>());
        if (nz.contains("sigma")) c.noise.sigma = nz.at("sigma").get<double>();
        if (nz.contains("mean_correct")) c.noise.mean_correct = nz.at("mean_correct").get<bool>();
      } catch (const json::exception&) {
        problems.push_back("'noise' has a field of the wrong type");
      } catch (const Error& e) {
        problems.push_back(e.what());
      }
    }
  }
  if (j.contains("methods")) {
    c.methods.clear();
    if (!j.at("methods").is_array()) {
      problems.push_back("'methods' must be an array of strings");
    } else {
      for (const auto& m : j.at("methods")) {
        try {
          c.methods.push_back(parse_method(m.get<std::string>(), c.multiplier));
        } catch (const json::exception&) {
          problems.push_back("'methods' entries must be strings");
        } catch (const Error& e) {
          problems.push_back(e.what());
        }
      }
    }
  }
  for (auto& v : validate(c)) problems.push_back(std::move(v));
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid experiment configuration:";
    for (const auto& m : problems) os << "\n  - " << m;
    throw Error(ErrorKind::Usage, os.str());
  }
  return c;
}

inline ExperimentConfig read_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::DataFormat, path + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

// ---- Coverage table -------------------------------------------------------

// Rows noise x method, one column per nominal level.
inline void write_coverage_csv(std::ostream& out, const CoverageReport& r) {
  std::vector<double> levels;
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& c : r.cells) {
    if (std::find(levels.begin(), levels.end(), c.nominal) == levels.end()) levels.push_back(c.nominal);
    const auto key = std::make_pair(c.noise, c.method);
    if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
  }
  out << "noise,method";
  for (double l : levels) out << "," << l;
  out << "\n" << std::setprecision(17);
  for (const auto& [noise, method] : rows) {
    out << noise << "," << method;
    for (double l : levels) {
      out << ",";
      for (const auto& c : r.cells)
        if (c.noise == noise && c.method == method && c.nominal == l) out << c.coverage;
    }
    out << "\n";
  }
}

// ---- Ellipse export -------------------------------------------------------

struct EllipsoidExport {
  struct Item {
    Vector center;
    Matrix shape;     // Omega_hat_i
    Matrix boundary;  // m x 2, empty unless p == 2
  };
  std::vector<Item> items;
  double radius = 0.0;
  long long n = 0;
};

// Boundary points x_hat_i + (radius / sqrt(n)) Omega_i^{1/2} (cos t, sin t).
inline EllipsoidExport export_ellipsoids(const ConfidenceSet& s, int m = 64) {
  EllipsoidExport ex;
  ex.radius = s.radius;
  ex.n = s.n();
  const double scale = s.radius / std::sqrt(static_cast<double>(s.n()));
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    EllipsoidExport::Item it;
    it.center = s.centers.row(i).transpose();
    it.shape = s.shapes.per_point[static_cast<std::size_t>(i)];
    if (s.centers.cols() == 2) {
      const Matrix root = sqrt_psd(it.shape);
      it.boundary.resize(m, 2);
      for (int k = 0; k < m; ++k) {
        const double t = 2.0 * std::numbers::pi * k / m;
        const Vector dir = Eigen::Vector2d(std::cos(t), std::sin(t));
        it.boundary.row(k) = (it.center + scale * root * dir).transpose();
      }
    }
    ex.items.push_back(std::move(it));
  }
  return ex;
}

inline json to_json(const EllipsoidExport& ex) {
  json items = json::array();
  for (const auto& it : ex.items)
    items.push_back({{"center", vector_to_json(it.center)},
                     {"shape", matrix_to_json(it.shape)},
                     {"boundary", matrix_to_json(it.boundary)}});
  return {{"radius", ex.radius}, {"n", ex.n}, {"ellipsoids", std::move(items)}};
}

inline EllipsoidExport ellipsoids_from_json(const json& j) {
  EllipsoidExport ex;
  ex.radius = j.at("radius").get<double>();
  ex.n = j.at("n").get<long long>();
  for (const auto& it : j.at("ellipsoids")) {
    EllipsoidExport::Item item;
    item.center = vector_from_json(it.at("center"));
    item.shape = matrix_from_json(it.at("shape"));
    item.boundary = matrix_from_json(it.at("boundary"));
    ex.items.push_back(std::move(item));
  }
  return ex;
}

// ---- Files ----------------------------------------------------------------

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Usage, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::DataFormat, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::DataFormat, path + ": " + e.what());
  }
}

}  // namespace noisy_mds
