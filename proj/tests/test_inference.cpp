#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "noisy_mds/inference.hpp"
#include "noisy_mds/noise.hpp"
#include "oracles.hpp"

using namespace noisy_mds;
using testing_helpers::mat;

namespace {

Embedding as_embedding(const Matrix& x) {
  Embedding e;
  e.coords = x;
  return e;
}

Embedding noisy_embedding(int n, std::uint64_t seed, SymmetricMatrix* d_out = nullptr) {
  std::mt19937_64 gen(seed);
  Matrix x = oracle::centered(oracle::random_matrix(n, 2, gen));
  x.col(0) *= 2.0;
  SymmetricMatrix d = squared_distance_matrix(x);
  const Matrix noise = 0.3 * oracle::random_matrix(n, n, gen);
  d += noise + noise.transpose();
  d.diagonal().setZero();
  if (d_out) *d_out = d;
  return mds_embed(d, 2);
}

}  // namespace

TEST(Residuals, NoiselessInputGivesZero) {
  std::mt19937_64 gen(1);
  const Matrix x = oracle::centered(oracle::random_matrix(15, 2, gen));
  const SymmetricMatrix d = squared_distance_matrix(x);
  const ResidualMatrix r = residuals(d, mds_embed(d, 2));
  EXPECT_LT(r.entries.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(r.variance, 1e-20);
}

TEST(Residuals, ConstantOffsetGivesConstantResiduals) {
  std::mt19937_64 gen(2);
  const Embedding e = as_embedding(oracle::random_matrix(9, 2, gen));
  SymmetricMatrix d = fitted_dissimilarities(e);
  d.array() += 0.75;
  d.diagonal().setZero();
  const ResidualMatrix r = residuals(d, e);
  EXPECT_NEAR(r.mean, 0.75, 1e-12);
  EXPECT_NEAR(r.variance, 0.0, 1e-12);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) EXPECT_NEAR(r.entries(i, j), i == j ? 0.0 : 0.75, 1e-12);
}

TEST(Residuals, VarianceMatchesTwoPassOracle) {
  SymmetricMatrix d;
  const Embedding e = noisy_embedding(20, 3, &d);
  const ResidualMatrix r = residuals(d, e);
  const SymmetricMatrix fit = squared_distance_matrix(e.coords);
  std::vector<double> vals;
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j) vals.push_back(d(i, j) - fit(i, j));
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= vals.size();
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= vals.size();
  EXPECT_NEAR(r.mean, mean, 1e-12);
  EXPECT_NEAR(r.variance, var, 1e-12);
  EXPECT_EQ(r.entries.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(OmegaOracle, IidCollapsesToScaledInverseScatter) {
  std::mt19937_64 gen(4);
  const Matrix x = oracle::centered(oracle::random_matrix(25, 2, gen));
  const SymmetricMatrix s2 = variance_oracle(squared_distance_matrix(x), {NoiseKind::Additive, 1.3, false});
  const SandwichCovariances om = omega_oracle(Configuration(x, true), s2);
  // Hollow Sigma_i: X' Sigma_i X = sigma^2 (X'X - x_i x_i').
  const Matrix gram = x.transpose() * x;
  for (int i = 0; i < 25; ++i) {
    const Matrix expected =
        (25.0 / 4.0) * 1.69 * gram.inverse() * (gram - x.row(i).transpose() * x.row(i)) * gram.inverse();
    EXPECT_LT((om.per_point[i] - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
  // With the diagonal term kept the sandwich is (sigma^2/4)(X'X/n)^{-1}.
  SymmetricMatrix full = s2;
  full.diagonal().setConstant(1.69);
  const SandwichCovariances omf = omega_oracle(Configuration(x, true), full);
  const Matrix iid = 0.25 * 1.69 * (gram / 25.0).inverse();
  for (const auto& m : omf.per_point) EXPECT_LT((m - iid).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OmegaOracle, ScalarSandwichExample) {
  const Matrix x = mat({{-4.0 / 3}, {-1.0 / 3}, {5.0 / 3}});
  SymmetricMatrix s2 = SymmetricMatrix::Zero(3, 3);
  s2(0, 1) = s2(1, 0) = 1.0;
  s2(0, 2) = s2(2, 0) = 1.0;
  const SandwichCovariances om = omega_oracle(Configuration(x, true), s2);
  const double sx2 = 16.0 / 9 + 1.0 / 9 + 25.0 / 9;
  EXPECT_NEAR(om.per_point[0](0, 0), 0.75 * (1.0 / 9 + 25.0 / 9) / (sx2 * sx2), 1e-14);
}

TEST(OmegaOracle, MatchesLoopOracle) {
  std::mt19937_64 gen(5);
  const Matrix x = oracle::centered(oracle::random_matrix(15, 3, gen));
  const SymmetricMatrix s2 = variance_oracle(squared_distance_matrix(x), {NoiseKind::Multiplicative, 0.4, false});
  const SandwichCovariances om = omega_oracle(Configuration(x, true), s2);
  const auto ref = oracle::sandwich(oracle::from_eigen(x), oracle::from_eigen(s2));
  for (int i = 0; i < 15; ++i)
    EXPECT_LT((om.per_point[i] - oracle::to_eigen(ref[i])).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(om.source, CovarianceSource::Oracle);
  EXPECT_TRUE(om.failures().empty());
}

TEST(OmegaOracle, TranslationThenRecenteringInvariance) {
  std::mt19937_64 gen(6);
  const Matrix x = oracle::centered(oracle::random_matrix(18, 2, gen));
  Matrix shifted = x;
  shifted.rowwise() += Eigen::RowVector2d(3.0, -7.0);
  const SymmetricMatrix s2 = variance_oracle(squared_distance_matrix(x), {NoiseKind::Multiplicative, 1.0, false});
  const SandwichCovariances a = omega_oracle(Configuration(x, true), s2);
  const SandwichCovariances b = omega_oracle(Configuration::centered(shifted), s2);
  for (int i = 0; i < 18; ++i) EXPECT_LT((a.per_point[i] - b.per_point[i]).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OmegaOracle, SingularGram) {
  const Matrix x = mat({{1, 0}, {-1, 0}, {0, 0}});
  try {
    omega_oracle(Configuration(x, true), SymmetricMatrix::Ones(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularGram);
  }
}

TEST(OmegaPlugin, ZeroResidualsGiveZeroNonPdMatrices) {
  std::mt19937_64 gen(7);
  const Embedding e = as_embedding(oracle::centered(oracle::random_matrix(10, 2, gen)));
  ResidualMatrix r;
  r.entries = SymmetricMatrix::Zero(10, 10);
  const SandwichCovariances om = omega_plugin(e, r);
  for (const auto& m : om.per_point) EXPECT_EQ(m.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(om.failures().size(), 10u);
  EXPECT_THROW(whiteners(om), Error);
}

TEST(OmegaPlugin, OracleInputsReproduceOracle) {
  std::mt19937_64 gen(8);
  const Matrix x = oracle::centered(oracle::random_matrix(16, 2, gen));
  const SymmetricMatrix s2 = variance_oracle(squared_distance_matrix(x), {NoiseKind::Multiplicative, 0.8, false});
  ResidualMatrix r;
  r.entries = s2.cwiseSqrt();
  const SandwichCovariances a = omega_plugin(as_embedding(x), r);
  const SandwichCovariances b = omega_oracle(Configuration(x, true), s2);
  for (int i = 0; i < 16; ++i) EXPECT_LT((a.per_point[i] - b.per_point[i]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OmegaPlugin, MatchesTripleProductOracle) {
  SymmetricMatrix d;
  const Embedding e = noisy_embedding(14, 9, &d);
  const ResidualMatrix r = residuals(d, e);
  const SandwichCovariances om = omega_plugin(e, r);
  const auto ref = oracle::sandwich(oracle::from_eigen(e.coords), oracle::from_eigen(r.entries.cwiseAbs2()));
  for (int i = 0; i < 14; ++i)
    EXPECT_LT((om.per_point[i] - oracle::to_eigen(ref[i])).cwiseAbs().maxCoeff(), 1e-10);
  for (const auto& m : om.per_point) EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OmegaIid, ClosedForm) {
  const Embedding e = noisy_embedding(20, 10);
  const SandwichCovariances om = omega_iid(e, 0.5);
  const Matrix expected = 0.25 * 0.25 * (e.coords.transpose() * e.coords / 20.0).inverse();
  EXPECT_EQ(om.source, CovarianceSource::IIDSpherical);
  for (const auto& m : om.per_point) EXPECT_LT((m - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ridge, AddsScaledIdentityAndRestoresPd) {
  SandwichCovariances c;
  c.per_point = {mat({{2, 0}, {0, 0}})};
  c.positive_definite = {false};
  const SandwichCovariances r = apply_ridge(c, 0.1);
  EXPECT_NEAR(r.per_point[0](0, 0), 2.1, 1e-15);
  EXPECT_NEAR(r.per_point[0](1, 1), 0.1, 1e-15);
  EXPECT_TRUE(r.failures().empty());
}

TEST(Whiteners, ListsEveryOffendingIndex) {
  SandwichCovariances c;
  c.per_point = {Matrix::Identity(2, 2), Matrix::Zero(2, 2), Matrix::Identity(2, 2), mat({{1, 0}, {0, -1}})};
  try {
    whiteners(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
    EXPECT_EQ(e.indices(), (std::vector<int>{1, 3}));
  }
}

TEST(Gumbel, NormalizationExamples) {
  const GumbelNormalization g = gumbel_normalization(100, 2);
  EXPECT_NEAR(g.b_n, std::sqrt(2.0 * std::log(100.0)), 1e-15);
  EXPECT_NEAR(g.b_n, 3.03485, 1e-5);
  EXPECT_NEAR(g.a_n, 0.32951, 1e-5);
  EXPECT_NEAR(g.a_n * g.b_n, 1.0, 1e-15);
  for (long long n : {10LL, 1000LL, 123456LL}) {
    const GumbelNormalization h = gumbel_normalization(n, 2);
    EXPECT_NEAR(h.b_n * h.b_n, 2.0 * std::log(static_cast<double>(n)), 1e-12);
  }
  const GumbelNormalization g4 = gumbel_normalization(1000, 4);
  EXPECT_NEAR(g4.b_n * g4.b_n, 2.0 * std::log(1000.0) + 2.0 * std::log(std::log(1000.0)), 1e-12);
  const GumbelNormalization g5 = gumbel_normalization(250, 5);
  EXPECT_NEAR(g5.b_n * g5.b_n,
              2.0 * std::log(250.0) + 3.0 * std::log(std::log(250.0)) - 2.0 * std::log(0.75 * std::sqrt(M_PI)),
              1e-12);
}

TEST(Gumbel, InvalidRegime) {
  // p = 8, n = 2: 2 log 2 + 6 log log 2 - 2 log 3! is about -4.40.
  EXPECT_THROW(gumbel_normalization(2, 8), Error);
  EXPECT_NO_THROW(gumbel_normalization(2, 1));
  EXPECT_THROW(gumbel_normalization(1, 2), Error);
}

TEST(Gumbel, QuantileExamples) {
  EXPECT_NEAR(gumbel_quantile(1.0 - std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(gumbel_quantile(0.05), -std::log(std::log(1.0 / 0.95)), 1e-14);
  EXPECT_NEAR(gumbel_quantile(0.05), 2.97020, 1e-5);
  EXPECT_NEAR(gumbel_quantile(0.5), 0.36651, 1e-5);
  for (double a : {1e-6, 0.01, 0.3, 0.9, 0.999}) EXPECT_NEAR(std::exp(-std::exp(-gumbel_quantile(a))), 1.0 - a, 1e-12);
  EXPECT_THROW(gumbel_quantile(0.0), Error);
  EXPECT_THROW(gumbel_quantile(1.0), Error);
}

TEST(Gumbel, TailIdentityExamples) {
  const TailIdentity a = gumbel_tail_identity_check(50, 2, 0.0);
  EXPECT_NEAR(a.lhs, 1.0 / 50, 1e-15);
  EXPECT_NEAR(a.rhs, 1.0 / 50, 1e-15);
  for (auto [n, t] : {std::pair{1000LL, 2.0}, std::pair{100LL, -1.0}}) {
    const TailIdentity b = gumbel_tail_identity_check(n, 2, t);
    EXPECT_NEAR(b.lhs, b.rhs, 1e-12);
  }
  EXPECT_THROW(gumbel_tail_identity_check(100, 3, 0.0), Error);
  EXPECT_THROW(gumbel_tail_identity_check(100, 2, -20.0), Error);
}

TEST(ConfidenceSet, MembershipArithmetic) {
  SandwichCovariances om;
  om.per_point.assign(4, Matrix::Identity(2, 2));
  const ConfidenceSet cs = make_confidence_set(Matrix::Zero(4, 2), om, 2.0, 0.1, SetMethod::PluginGumbel);
  EXPECT_TRUE(cs.contains(0, Eigen::Vector2d(0.9, 0.0)));
  EXPECT_FALSE(cs.contains(0, Eigen::Vector2d(1.1, 0.0)));
  EXPECT_NEAR(cs.distance(0, Eigen::Vector2d(0.9, 0.0)), 1.8, 1e-15);
  Matrix pts = Matrix::Zero(4, 2);
  pts(3, 0) = 0.9;
  EXPECT_TRUE(cs.contains_all(pts));
  pts(2, 1) = 1.1;
  EXPECT_FALSE(cs.contains_all(pts));
}

TEST(ConfidenceSet, PluginRadiusClosedForm) {
  EXPECT_NEAR(gumbel_radius(100, 2, 0.1), 3.03485 + 0.32951 * 2.25037, 1e-4);
  const GumbelNormalization g = gumbel_normalization(100, 2);
  EXPECT_NEAR(gumbel_radius(100, 2, 0.1), g.b_n + g.a_n * -std::log(std::log(1.0 / 0.9)), 1e-14);
  const Embedding e = noisy_embedding(100, 11);
  SandwichCovariances om;
  om.per_point.assign(100, Matrix::Identity(2, 2));
  const ConfidenceSet cs = plugin_confidence_set(e, om, 0.1);
  EXPECT_NEAR(cs.radius, gumbel_radius(100, 2, 0.1), 1e-14);
  EXPECT_EQ(cs.method, SetMethod::PluginGumbel);
}

TEST(ConfidenceSet, EmptyWhenRadiusNotPositive) {
  // b_n + a_n q <= 0 requires q <= -b_n^2 = -2 log 3; alpha = 1 - 1e-7 gives q = -2.78.
  SandwichCovariances om;
  om.per_point.assign(3, Matrix::Identity(2, 2));
  try {
    plugin_confidence_set(noisy_embedding(3, 12), om, 1.0 - 1e-7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySet);
  }
  EXPECT_THROW(make_confidence_set(Matrix::Zero(3, 2), om, 0.0, 0.5, SetMethod::Multiplier), Error);
}

TEST(ConfidenceSet, NotPositiveDefiniteShapesRejected) {
  SandwichCovariances om;
  om.per_point = {Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  EXPECT_THROW(make_confidence_set(Matrix::Zero(2, 2), om, 1.0, 0.1, SetMethod::PluginGumbel), Error);
}

TEST(StatisticT, Examples) {
  const Embedding e = noisy_embedding(30, 13);
  SandwichCovariances id;
  id.per_point.assign(30, Matrix::Identity(2, 2));
  EXPECT_EQ(statistic_T(e.coords, e, id), 0.0);
  Matrix moved = e.coords;
  moved.row(7) += Eigen::RowVector2d(0.3, -0.4);
  EXPECT_NEAR(statistic_T(moved, e, id), std::sqrt(30.0) * 0.5, 1e-12);
}

TEST(StatisticT, MatchesLoopOracle) {
  SymmetricMatrix d;
  const Embedding e = noisy_embedding(25, 14, &d);
  const SandwichCovariances om = omega_plugin(e, residuals(d, e));
  std::mt19937_64 gen(15);
  const Matrix other = e.coords + 0.05 * oracle::random_matrix(25, 2, gen);
  std::vector<oracle::Mat> oms;
  for (const auto& m : om.per_point) oms.push_back(oracle::from_eigen(m));
  EXPECT_NEAR(statistic_T(other, e, om),
              oracle::max_statistic(oracle::from_eigen(other), oracle::from_eigen(e.coords), oms), 1e-12);
}

TEST(OracleSet, CarriesShapesIntoEmbeddingFrame) {
  const Embedding e = noisy_embedding(40, 16);
  SandwichCovariances om;
  om.per_point.assign(40, mat({{2, 0}, {0, 1}}));
  const RigidRotation swap{mat({{0, 1}, {1, 0}}), false};
  const ConfidenceSet cs = oracle_confidence_set(e, om, swap, 0.1);
  EXPECT_LT((cs.shapes.per_point[0] - mat({{1, 0}, {0, 2}})).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(cs.radius, gumbel_radius(40, 2, 0.1), 1e-15);
}
