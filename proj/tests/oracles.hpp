#pragma once

// Reference computations for the tests. They are written with plain loops and
// avoid the library's own kernels so that agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat from_eigen(const Eigen::MatrixXd& m) {
  Mat out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline Eigen::MatrixXd to_eigen(const Mat& m) {
  Eigen::MatrixXd out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
  return out;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// -1/2 H D H with H formed explicitly.
inline Mat double_center(const Mat& d) {
  const std::size_t n = d.size();
  Mat h(n, std::vector<double>(n, -1.0 / n));
  for (std::size_t i = 0; i < n; ++i) h[i][i] += 1.0;
  Mat b = multiply(multiply(h, d), h);
  for (auto& row : b)
    for (auto& v : row) v *= -0.5;
  return b;
}

// Cyclic Jacobi rotations; returns eigenvalues descending with eigenvectors as
// matching columns.
inline std::pair<std::vector<double>, Mat> jacobi_eigen(Mat a, int sweeps = 100) {
  const std::size_t n = a.size();
  Mat v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - sn * akq;
          a[k][q] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - sn * aqk;
          a[q][k] = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - sn * vkq;
          v[k][q] = sn * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  std::vector<double> values(n);
  Mat vectors(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = a[order[k]][order[k]];
    for (std::size_t i = 0; i < n; ++i) vectors[i][k] = v[i][order[k]];
  }
  return {values, vectors};
}

// 2x2 or general small inverse by Gauss-Jordan.
inline Mat inverse(Mat a) {
  const std::size_t n = a.size();
  Mat inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// (n/4) (X'X)^{-1} (X' diag(w_i.) X) (X'X)^{-1}, one matrix per row i.
inline std::vector<Mat> sandwich(const Mat& x, const Mat& w) {
  const std::size_t n = x.size(), p = x[0].size();
  Mat g(p, std::vector<double>(p, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) g[a][b] += x[k][a] * x[k][b];
  const Mat gi = inverse(g);
  std::vector<Mat> out;
  for (std::size_t i = 0; i < n; ++i) {
    Mat mid(p, std::vector<double>(p, 0.0));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) mid[a][b] += w[i][k] * x[k][a] * x[k][b];
    Mat om = multiply(multiply(gi, mid), gi);
    for (auto& row : om)
      for (auto& v : row) v *= static_cast<double>(n) / 4.0;
    out.push_back(om);
  }
  return out;
}

// Symmetric inverse square root through the Jacobi oracle.
inline Mat inv_sqrt(const Mat& m) {
  const auto [vals, vecs] = jacobi_eigen(m);
  const std::size_t p = m.size();
  Mat r(p, std::vector<double>(p, 0.0));
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) r[i][j] += vecs[i][k] * vecs[j][k] / std::sqrt(vals[k]);
  return r;
}

// max_i sqrt(n) || Omega_i^{-1/2} (a_i - b_i) || with a per-row loop.
inline double max_statistic(const Mat& a, const Mat& b, const std::vector<Mat>& omega) {
  const std::size_t n = a.size(), p = a[0].size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Mat w = inv_sqrt(omega[i]);
    double s = 0.0;
    for (std::size_t r = 0; r < p; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < p; ++c) acc += w[r][c] * (a[i][c] - b[i][c]);
      s += acc * acc;
    }
    best = std::max(best, std::sqrt(static_cast<double>(n) * s));
  }
  return best;
}

// Haar-distributed orthogonal matrix.
inline Eigen::MatrixXd random_orthogonal(int p, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd g(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) g(i, j) = z(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int k = 0; k < p; ++k)
    if (r(k, k) < 0) q.col(k) *= -1.0;
  return q;
}

inline Eigen::MatrixXd random_matrix(int n, int p, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = z(gen);
  return m;
}

inline Eigen::MatrixXd centered(Eigen::MatrixXd m) {
  const Eigen::RowVectorXd mean = m.colwise().mean();
  m.rowwise() -= mean;
  return m;
}

}  // namespace oracle
