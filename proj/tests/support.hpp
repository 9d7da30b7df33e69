#pragma once

// Test-side generators and reference values. Nothing here calls into the library's
// numerical routines; the oracles are deliberately naive.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testing_support {

using Rng = std::mt19937_64;

inline double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

/// Gaussian generator with condition number below max_cond, rescaled to unit volume.
inline Eigen::MatrixXd random_generator(Rng& rng, int n, double max_cond = 50.0) {
  std::normal_distribution<double> g;
  while (true) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    }
    const double det = m.determinant();
    if (std::abs(det) < 1e-3 || condition_number(m) >= max_cond) continue;
    return m / std::pow(std::abs(det), 1.0 / n);
  }
}

/// Positive diagonal, log-uniform in [lo, hi], rescaled to product 1.
inline Eigen::VectorXd random_diagonal(Rng& rng, int n, double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXd d(n);
  double log_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    d(i) = u(rng);
    log_sum += d(i);
  }
  return (d.array() - log_sum / n).exp().matrix();
}

/// Strict upper entries, row-major, uniform in [-1, 1] times the column's diagonal entry.
inline Eigen::VectorXd random_upper(Rng& rng, const Eigen::VectorXd& diag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Index n = diag.size();
  Eigen::VectorXd up(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) up(k++) = u(rng) * diag(j);
  }
  return up;
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

/// sum_{k in Z} exp(-x (k + a)^2) over |k + a| <= sqrt(100 / x) + 2, smallest terms first.
inline long double psi_1d(double x, double a = 0.0) {
  const long reach = static_cast<long>(std::ceil(std::sqrt(100.0 / x) + std::abs(a))) + 2;
  std::vector<long double> terms;
  for (long k = -reach; k <= reach; ++k) {
    const long double t = static_cast<long double>(k) + a;
    terms.push_back(std::exp(-static_cast<long double>(x) * t * t));
  }
  std::sort(terms.begin(), terms.end());
  long double s = 0.0L;
  for (long double t : terms) s += t;
  return s;
}

/// Gaussian tail probability Q(t) = P(N(0,1) > t).
inline double q_function(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

/// Closest lattice point by exhaustive search. With D the distance to the point at the rounded
/// real coordinates c, any closer point M z has |z_i - c_i| <= |row i of M^-1| * D, so the box
/// of those ranges is complete.
inline Eigen::VectorXd box_closest(const Eigen::MatrixXd& m, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(m.cols());
  const Eigen::MatrixXd inv = m.inverse();
  const Eigen::VectorXd c = inv * y;
  const double reach_dist = (m * c.array().round().matrix() - y).norm();
  std::vector<long> lo(n), hi(n), z(n);
  for (int i = 0; i < n; ++i) {
    const double r = inv.row(i).norm() * reach_dist + 1e-9;
    lo[i] = static_cast<long>(std::ceil(c(i) - r));
    hi[i] = static_cast<long>(std::floor(c(i) + r));
    z[i] = lo[i];
  }
  Eigen::VectorXd best;
  double best_d = std::numeric_limits<double>::infinity();
  while (true) {
    Eigen::VectorXd zd(n);
    for (int i = 0; i < n; ++i) zd(i) = static_cast<double>(z[i]);
    const Eigen::VectorXd p = m * zd;
    const double d = (p - y).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = p;
    }
    int i = 0;
    while (i < n && z[i] == hi[i]) {
      z[i] = lo[i];
      ++i;
    }
    if (i == n) break;
    ++z[i];
  }
  return best;
}

/// Number of points of Z^n with squared norm <= r2.
inline std::uint64_t count_zn_ball(int n, int r2) {
  const int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(r2))));
  std::vector<int> v(n, -r);
  std::uint64_t count = 0;
  while (true) {
    int s = 0;
    for (int x : v) s += x * x;
    if (s <= r2) ++count;
    int i = 0;
    while (i < n && v[i] == r) v[i++] = -r;
    if (i == n) break;
    ++v[i];
  }
  return count;
}

/// Squared-norm histogram of E8 = D8 + (1/2, ..., 1/2) up to norm 4, by scanning doubled
/// coordinates 2v in [-4, 4]^8 with all entries even or all odd and sum of v even.
inline std::map<int, std::uint64_t> e8_shell_counts() {
  std::map<int, std::uint64_t> counts;
  std::array<int, 8> w{};
  for (int parity = 0; parity < 2; ++parity) {
    const std::vector<int> values = parity == 0 ? std::vector<int>{-4, -2, 0, 2, 4} : std::vector<int>{-3, -1, 1, 3};
    const int base = static_cast<int>(values.size());
    std::array<int, 8> idx{};
    while (true) {
      int sum = 0, norm4 = 0;
      for (int i = 0; i < 8; ++i) {
        w[i] = values[idx[i]];
        sum += w[i];
        norm4 += w[i] * w[i];
      }
      if (sum % 4 == 0 && norm4 <= 16) ++counts[norm4 / 4];
      int i = 0;
      while (i < 8 && idx[i] == base - 1) idx[i++] = 0;
      if (i == 8) break;
      ++idx[i];
    }
  }
  return counts;
}

/// True when every column of m (doubled) has all-even or all-odd entries with sum divisible by 4.
inline bool columns_in_e8(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Eigen::VectorXd w = 2.0 * m.col(j);
    long sum = 0;
    const long parity = std::lround(w(0)) & 1;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (std::abs(w(i) - std::round(w(i))) > 1e-12) return false;
      const long v = std::lround(w(i));
      if ((v & 1) != parity) return false;
      sum += v;
    }
    if (sum % 4 != 0) return false;
  }
  return true;
}

}  // namespace testing_support
