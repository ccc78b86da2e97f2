// linalg.hpp — small dense symmetric systems and principal directions.
//
// Node counts stay in the hundreds for every pipeline here, so a plain
// O(k^3) LDL^T factorization with multiple right-hand sides covers the
// optimizer's needs without an external linear-algebra dependency.
#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "epg/common.hpp"

namespace epg {

// Dense row-major matrix, value type.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  std::span<double> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

inline double max_abs_diag(const Matrix& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) v = std::max(v, std::abs(m(i, i)));
  return v;
}

inline double trace(const Matrix& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// LDL^T factorization of a symmetric matrix without pivoting. The systems
// assembled by the optimizer are positive semi-definite; a pivot falling
// under rel_tol * max|a_ii| reports failure so the caller can regularize.
class LdltSolver {
public:
  bool factor(const Matrix& a, double rel_tol = 1e-14) {
    n_ = a.rows();
    l_ = a;
    d_.assign(n_, 0.0);
    const double floor = rel_tol * std::max(max_abs_diag(a), 1e-300);
    for (std::size_t j = 0; j < n_; ++j) {
      double dj = a(j, j);
      for (std::size_t k = 0; k < j; ++k) dj -= l_(j, k) * l_(j, k) * d_[k];
      if (!(std::abs(dj) > floor)) return false;
      d_[j] = dj;
      for (std::size_t i = j + 1; i < n_; ++i) {
        double v = a(i, j);
        for (std::size_t k = 0; k < j; ++k) v -= l_(i, k) * l_(j, k) * d_[k];
        l_(i, j) = v / dj;
      }
    }
    return true;
  }

  // Solves A X = B in place; B is n x nrhs. One factorization serves all
  // right-hand sides.
  void solve(Matrix& b) const {
    const std::size_t m = b.cols();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < i; ++k) {
        const double lik = l_(i, k);
        if (lik == 0.0) continue;
        for (std::size_t c = 0; c < m; ++c) b(i, c) -= lik * b(k, c);
      }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t c = 0; c < m; ++c) b(i, c) /= d_[i];
    for (std::size_t ii = n_; ii-- > 0;)
      for (std::size_t k = ii + 1; k < n_; ++k) {
        const double lki = l_(k, ii);
        if (lki == 0.0) continue;
        for (std::size_t c = 0; c < m; ++c) b(ii, c) -= lki * b(k, c);
      }
  }

private:
  std::size_t n_ = 0;
  Matrix l_;
  std::vector<double> d_;
};

// Column means of an n x m row-major point block.
inline std::vector<double> column_means(std::span<const double> pts, std::size_t n, std::size_t m) {
  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mean[j] += pts[i * m + j];
  for (auto& v : mean) v /= double(n);
  return mean;
}

// Dominant eigenvector of the covariance of centered points, by power
// iteration on X^T X. Start vector is the axis of largest column spread,
// which makes the result deterministic. `deflate` holds previously found
// directions that are projected out (for the second component).
inline std::vector<double> principal_direction(std::span<const double> pts, std::size_t n,
                                               std::size_t m, const std::vector<double>& mean,
                                               const std::vector<std::vector<double>>& deflate = {},
                                               std::size_t max_iter = 500, double tol = 1e-13) {
  std::vector<double> spread(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) spread[j] += sq(pts[i * m + j] - mean[j]);
  std::size_t start_axis =
      std::size_t(std::max_element(spread.begin(), spread.end()) - spread.begin());

  std::vector<double> v(m, 0.0);
  v[start_axis] = 1.0;
  auto project_out = [&](std::vector<double>& w) {
    for (const auto& d : deflate) {
      double dot = 0.0;
      for (std::size_t j = 0; j < m; ++j) dot += w[j] * d[j];
      for (std::size_t j = 0; j < m; ++j) w[j] -= dot * d[j];
    }
  };
  project_out(v);
  std::vector<double> w(m), proj(n);
  for (std::size_t it = 0; it < max_iter; ++it) {
    // w = (1/n) X^T (X v) on centered data
    for (std::size_t i = 0; i < n; ++i) {
      double t = 0.0;
      for (std::size_t j = 0; j < m; ++j) t += (pts[i * m + j] - mean[j]) * v[j];
      proj[i] = t;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) w[j] += proj[i] * (pts[i * m + j] - mean[j]);
    project_out(w);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm <= 0.0) break;  // degenerate: data has no spread off the deflated space
    for (auto& x : w) x /= norm;
    double delta = 0.0;
    for (std::size_t j = 0; j < m; ++j) delta = std::max(delta, std::abs(std::abs(w[j]) - std::abs(v[j])));
    v = w;
    if (delta < tol) break;
  }
  // Fixed sign convention: first nonzero component positive.
  for (std::size_t j = 0; j < m; ++j) {
    if (v[j] != 0.0) {
      if (v[j] < 0.0)
        for (auto& x : v) x = -x;
      break;
    }
  }
  return v;
}

}  // namespace epg
