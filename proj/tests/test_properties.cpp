#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "noisy_mds/bootstrap.hpp"
#include "noisy_mds/evaluation.hpp"
#include "noisy_mds/noise.hpp"
#include "oracles.hpp"

using namespace noisy_mds;

namespace {

struct Data {
  Matrix x;
  SymmetricMatrix d;
  Embedding e;
  ResidualMatrix r;
  SandwichCovariances om;
};

Data make_data(int n, std::uint64_t seed, NoiseKind kind = NoiseKind::Additive, double sigma = 1.0) {
  SeededRng lat(seed, 0);
  Data out;
  out.x = generate_latent(LatentKind::Ellipse, n, 2, lat).coords;
  SeededRng rng(seed, 1);
  out.d = noisy_dissimilarities(squared_distance_matrix(out.x), {kind, sigma, false}, rng);
  out.e = mds_embed(out.d, 2);
  out.r = residuals(out.d, out.e);
  out.om = omega_plugin(out.e, out.r);
  return out;
}

}  // namespace

TEST(Properties, OmegaEquivariance) {
  std::mt19937_64 gen(101);
  for (int rep = 0; rep < 100; ++rep) {
    const int p = 1 + rep % 4;
    const int n = 10 + rep % 17;
    const Matrix x = oracle::centered(oracle::random_matrix(n, p, gen));
    const Matrix o = oracle::random_orthogonal(p, gen);
    const Matrix xo = x * o.transpose();
    const NoiseSpec spec{rep % 2 ? NoiseKind::Multiplicative : NoiseKind::LogNormal, 0.5, false};
    const SymmetricMatrix s2 = variance_oracle(squared_distance_matrix(x), spec);
    const SandwichCovariances a = omega_oracle(Configuration(x, true), s2);
    const SandwichCovariances b = omega_oracle(Configuration(xo, true), s2);
    for (int i = 0; i < n; ++i) {
      const Matrix expected = o * a.per_point[i] * o.transpose();
      EXPECT_LT((b.per_point[i] - expected).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, expected.norm()))
          << "rep " << rep << " point " << i;
    }
  }
}

TEST(Properties, ProcrustesOptimality) {
  std::mt19937_64 gen(102);
  for (int rep = 0; rep < 20; ++rep) {
    const int p = 1 + rep % 4;
    const Matrix a = oracle::random_matrix(12, p, gen), b = oracle::random_matrix(12, p, gen);
    const RigidRotation q = procrustes_rotation(a, b);
    EXPECT_LT((q.matrix.transpose() * q.matrix - Matrix::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-10);
    const double best = (a - b * q.matrix).norm();
    for (int k = 0; k < 100; ++k) EXPECT_LE(best, (a - b * oracle::random_orthogonal(p, gen)).norm() + 1e-12);
  }
}

TEST(Properties, ConfidenceSetNesting) {
  const Data data = make_data(80, 103);
  const BootstrapRun run = bootstrap_statistics(data.e, data.r, data.om, BootstrapMethod::multiplier(), 100, 7);
  std::mt19937_64 gen(104);
  const std::vector<double> alphas{0.01, 0.05, 0.1, 0.2, 0.5};
  std::vector<ConfidenceSet> sets;
  for (double a : alphas)
    sets.push_back(make_confidence_set(data.e.coords, data.om, empirical_quantile(run.statistics, a), a,
                                       SetMethod::Multiplier));
  for (int k = 0; k < 2000; ++k) {
    const auto i = static_cast<Eigen::Index>(k % 80);
    const Vector y = data.e.coords.row(i).transpose() + 0.3 * oracle::random_matrix(2, 1, gen).col(0);
    for (std::size_t s = 0; s + 1 < sets.size(); ++s) {
      EXPECT_GE(sets[s].radius, sets[s + 1].radius);
      if (sets[s + 1].contains(i, y)) EXPECT_TRUE(sets[s].contains(i, y));
    }
  }
  for (std::size_t s = 0; s + 1 < alphas.size(); ++s) {
    const double g1 = gumbel_radius(80, 2, alphas[s]), g2 = gumbel_radius(80, 2, alphas[s + 1]);
    EXPECT_GT(g1, g2);
  }
}

TEST(Properties, MultiplierMoments) {
  const int draws = 1000000;
  for (MultiplierFamily f : {MultiplierFamily::Gaussian, MultiplierFamily::Rademacher, MultiplierFamily::Uniform}) {
    SeededRng rng(105, static_cast<std::uint64_t>(f));
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int k = 0; k < draws; ++k) {
      const double r = draw_multiplier(f, rng);
      if (f == MultiplierFamily::Rademacher) ASSERT_TRUE(r == 1.0 || r == -1.0);
      if (f == MultiplierFamily::Uniform) ASSERT_LE(std::abs(r), std::sqrt(3.0));
      s1 += r;
      s2 += r * r;
      s4 += r * r * r * r;
    }
    const double mean = s1 / draws, m2 = s2 / draws, m4 = s4 / draws;
    const double var = m2 - mean * mean;
    EXPECT_LT(std::abs(mean), 5.0 * std::sqrt(var / draws)) << to_string(f);
    // Var of the sample second moment is (E r^4 - 1) / draws; zero for Rademacher.
    const double se = std::sqrt(std::max(m4 - 1.0, 0.0) / draws);
    EXPECT_LE(std::abs(m2 - 1.0), 5.0 * se + 1e-12) << to_string(f);
  }
}

TEST(Properties, BootstrapDeterministicAcrossThreads) {
  const Data data = make_data(100, 106);
  for (const BootstrapMethod& m : {BootstrapMethod::multiplier(MultiplierFamily::Gaussian),
                                   BootstrapMethod::multiplier(MultiplierFamily::Uniform),
                                   BootstrapMethod::empirical()}) {
    BootstrapOptions one, eight;
    eight.threads = 8;
    const BootstrapResult a = run_bootstrap(data.e, data.r, data.om, m, 64, 0.1, 2024, one);
    const BootstrapResult b = run_bootstrap(data.e, data.r, data.om, m, 64, 0.1, 2024, eight);
    EXPECT_EQ(a.run.statistics, b.run.statistics) << m.label();
    EXPECT_EQ(a.run.quantile_value, b.run.quantile_value);
    EXPECT_EQ(a.run.failed, b.run.failed);
  }
}

TEST(Properties, MembershipInvariantUnderJointRotation) {
  const Data data = make_data(50, 107);
  std::mt19937_64 gen(108);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix o = oracle::random_orthogonal(2, gen);
    const ConfidenceSet a = plugin_confidence_set(data.e, data.om, 0.1);
    const ConfidenceSet b = make_confidence_set(data.e.coords * o.transpose(), conjugate(data.om, o), a.radius, 0.1,
                                                SetMethod::PluginGumbel);
    for (int k = 0; k < 50; ++k) {
      const Vector y = a.centers.row(k).transpose() + 0.4 * oracle::random_matrix(2, 1, gen).col(0);
      const double da = a.distance(k, y), db = b.distance(k, o * y);
      EXPECT_NEAR(da, db, 1e-9 * std::max(1.0, da));
      if (std::abs(da - a.radius) > 1e-9) EXPECT_EQ(a.contains(k, y), b.contains(k, o * y));
    }
  }
}

TEST(Properties, StatisticInvariantUnderJointRotation) {
  const Data data = make_data(50, 109);
  const TruthAlignment al = align_truth_to_embedding(Configuration(data.x, true), data.e);
  const double t = statistic_T(al.aligned, data.e, data.om);
  std::mt19937_64 gen(110);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix o = oracle::random_orthogonal(2, gen);
    Embedding rotated = data.e;
    rotated.coords = data.e.coords * o.transpose();
    EXPECT_NEAR(statistic_T(al.aligned * o.transpose(), rotated, conjugate(data.om, o)), t, 1e-9 * t);
  }
}

TEST(Properties, IidCovarianceEigenvaluesWithinKappaBounds) {
  std::mt19937_64 gen(111);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x = oracle::centered(oracle::random_matrix(30, 2, gen));
    x.col(0) *= 0.2 + rep * 0.3;
    const double sigma = 0.5 + 0.1 * rep;
    const SymmetricMatrix s2 = variance_oracle(squared_distance_matrix(x), {NoiseKind::Additive, sigma, false});
    const DiagnosticsReport diag = check_assumptions(Configuration(x, true), s2);
    const Matrix om = 0.25 * sigma * sigma * (x.transpose() * x / 30.0).inverse();
    Eigen::SelfAdjointEigenSolver<Matrix> es(om);
    const double k2 = diag.kappa * diag.kappa, s = sigma * sigma;
    EXPECT_GE(es.eigenvalues().minCoeff(), s / (4.0 * k2) * (1 - 1e-12));
    EXPECT_LE(es.eigenvalues().maxCoeff(), s * k2 / 4.0 * (1 + 1e-12));
  }
}

TEST(Properties, CoverageMonotoneInNominalLevel) {
  ExperimentConfig c;
  c.n = 50;
  c.methods = {MethodSpec::plugin(), MethodSpec::multiplier()};
  c.alphas = {0.05, 0.1, 0.25};
  c.B = 50;
  c.trials = 10;
  c.master_seed = 112;
  const CoverageReport r = run_coverage(c);
  for (const char* m : {"plugin", "multiplier:gaussian"}) {
    EXPECT_LE(r.find(m, 0.75)->coverage, r.find(m, 0.9)->coverage);
    EXPECT_LE(r.find(m, 0.9)->coverage, r.find(m, 0.95)->coverage);
  }
}

TEST(Properties, KsOfSampleAgainstItselfIsZero) {
  std::mt19937_64 gen(113);
  std::extreme_value_distribution<double> g;
  std::vector<double> s(300);
  for (auto& v : s) v = g(gen);
  EXPECT_EQ(ks_two_sample(s, s), 0.0);
  EXPECT_LT(ks_distance_to_gumbel(s), 0.1);
}

TEST(Properties, NoiseGenerationReproducible) {
  const Data a = make_data(40, 114, NoiseKind::LogNormal, 0.4);
  const Data b = make_data(40, 114, NoiseKind::LogNormal, 0.4);
  EXPECT_TRUE(a.d == b.d);
  EXPECT_TRUE(a.d == a.d.transpose());
  EXPECT_EQ(a.d.diagonal().cwiseAbs().maxCoeff(), 0.0);
}
