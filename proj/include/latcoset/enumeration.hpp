#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latcoset/error.hpp"
#include "latcoset/integer_matrix.hpp"
#include "latcoset/lattice.hpp"

namespace latcoset {

inline constexpr std::uint64_t kDefaultPointCap = 10'000'000;
inline constexpr double kShellMergeTol = 1e-7;

/// M = Q R with Q orthogonal and R upper triangular with positive diagonal.
/// Then ||M w - y||^2 = ||R w - Q^T y||^2, which is what the searches below walk.
class TriangularFactor {
 public:
  explicit TriangularFactor(const Eigen::MatrixXd& generator) : n_(static_cast<int>(generator.rows())) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(generator);
    q_ = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n_; ++i) {
      if (r(i, i) < 0.0) {
        r.row(i) *= -1.0;
        q_.col(i) *= -1.0;
      }
    }
    r_ = r;
    rows_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      for (int j = i; j < n_; ++j) rows_[static_cast<std::size_t>(i) * n_ + j] = r(i, j);
    }
  }

  explicit TriangularFactor(const Lattice& lat) : TriangularFactor(lat.generator()) {}

  int dim() const noexcept { return n_; }
  const Eigen::MatrixXd& r() const noexcept { return r_; }
  const Eigen::MatrixXd& q() const noexcept { return q_; }
  const double* row(int i) const noexcept { return rows_.data() + static_cast<std::size_t>(i) * n_; }

  Eigen::VectorXd rotate(const Eigen::VectorXd& y) const { return q_.transpose() * y; }

  /// Gram-Schmidt lengths ||b*_i||.
  Eigen::VectorXd gram_schmidt_norms() const { return r_.diagonal(); }

 private:
  int n_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  std::vector<double> rows_;
};

namespace detail {

/// Depth-first Fincke-Pohst walk over all w in Z^n with ||R w - z||^2 <= bound_sq.
/// Calls visit(span<const int64_t> w, double dist_sq) in a fixed, input-determined order.
template <class Visitor>
void for_each_in_ball(const TriangularFactor& f, const Eigen::VectorXd& z, double bound_sq, Visitor&& visit) {
  const int n = f.dim();
  if (bound_sq < 0.0) return;
  std::vector<double> center(n, 0.0);
  std::vector<double> partial(n + 1, 0.0);
  std::vector<std::int64_t> omega(n, 0);
  std::vector<std::int64_t> last(n, 0);

  auto open = [&](int i) -> bool {
    const double* row = f.row(i);
    double s = z[i];
    for (int j = i + 1; j < n; ++j) s -= row[j] * static_cast<double>(omega[j]);
    const double c = s / row[i];
    const double rem = bound_sq - partial[i + 1];
    if (rem < 0.0) return false;
    const double h = std::sqrt(rem) / row[i];
    const double lo = std::ceil(c - h);
    const double hi = std::floor(c + h);
    if (lo > hi) return false;
    center[i] = c;
    omega[i] = static_cast<std::int64_t>(lo);
    last[i] = static_cast<std::int64_t>(hi);
    return true;
  };

  int i = n - 1;
  if (!open(i)) return;
  const std::span<const std::int64_t> coords(omega);
  while (true) {
    if (i == 0) {
      const double r00 = f.row(0)[0];
      const double c0 = center[0];
      const double base = partial[1];
      for (std::int64_t w = omega[0]; w <= last[0]; ++w) {
        const double d = r00 * (static_cast<double>(w) - c0);
        const double dist = base + d * d;
        if (dist <= bound_sq) {
          omega[0] = w;
          visit(coords, dist);
        }
      }
      i = 1;
    } else {
      const double d = f.row(i)[i] * (static_cast<double>(omega[i]) - center[i]);
      partial[i] = partial[i + 1] + d * d;
      if (open(i - 1)) {
        --i;
        continue;
      }
    }
    while (i < n && omega[i] >= last[i]) ++i;
    if (i == n) return;
    ++omega[i];
  }
}

inline double radius_slack(double radius_sq, double tol) { return tol * std::max(1.0, radius_sq); }

}  // namespace detail

struct Shell {
  double norm_sq;
  std::uint64_t count;
};

/// Lattice points within a radius, grouped by squared norm.
struct ShellTable {
  std::vector<Shell> entries;
  double radius = 0.0;

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& s : entries) t += s.count;
    return t;
  }
};

struct EnumerationOptions {
  std::uint64_t point_cap = kDefaultPointCap;
  double merge_tol = kShellMergeTol;
};

/// Every lattice point with ||t||^2 <= radius^2 (+ tol slack), grouped into shells whose
/// squared norms lie within merge_tol of the shell's smallest member.
inline ShellTable enumerate(const Lattice& lat, double radius, const EnumerationOptions& opts = {}) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::invalid_argument, "radius must be finite and nonnegative");
  }
  const TriangularFactor f(lat);
  const double r2 = radius * radius;
  std::vector<double> norms;
  detail::for_each_in_ball(f, Eigen::VectorXd::Zero(lat.dim()), r2 + detail::radius_slack(r2, lat.tol()),
                           [&](std::span<const std::int64_t>, double dist) {
                             if (norms.size() >= opts.point_cap) {
                               throw Error(ErrorKind::point_count_cap,
                                           "more than " + std::to_string(opts.point_cap) + " points within radius");
                             }
                             norms.push_back(dist);
                           });
  std::sort(norms.begin(), norms.end());
  ShellTable table;
  table.radius = radius;
  std::size_t start = 0;
  while (start < norms.size()) {
    std::size_t end = start + 1;
    double sum = norms[start];
    while (end < norms.size() && norms[end] - norms[start] <= opts.merge_tol) sum += norms[end++];
    const double mean = (start == 0 && norms[0] == 0.0) ? 0.0 : sum / static_cast<double>(end - start);
    table.entries.push_back(Shell{mean, end - start});
    start = end;
  }
  return table;
}

/// Schnorr-Euchner closest-point search. Ties (within a relative 1e-12 of the best
/// distance) go to the lexicographically smallest coordinate vector.
class SphereDecoder {
 public:
  explicit SphereDecoder(const Lattice& lat) : lattice_(lat), factor_(lat) {}

  const Lattice& lattice() const noexcept { return lattice_; }

  IntVector decode_coordinates(const Eigen::VectorXd& y) const {
    lattice_.require_dim(y.size());
    const int n = factor_.dim();
    const Eigen::VectorXd z = factor_.rotate(y);

    std::vector<double> center(n), partial(n + 1, 0.0);
    std::vector<std::int64_t> omega(n), base(n), step(n), dir(n);
    std::vector<std::int64_t> best(n);

    // Babai nearest plane gives a finite starting radius.
    double best_dist = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      const double c = level_center(z, omega, i);
      omega[i] = static_cast<std::int64_t>(std::llround(c));
      const double d = factor_.row(i)[i] * (static_cast<double>(omega[i]) - c);
      best_dist += d * d;
    }
    best = omega;

    auto tie_slack = [&]() { return 1e-12 * std::max(best_dist, 1e-300); };
    auto init_level = [&](int i) {
      const double c = level_center(z, omega, i);
      center[i] = c;
      base[i] = static_cast<std::int64_t>(std::llround(c));
      dir[i] = (c >= static_cast<double>(base[i])) ? 1 : -1;
      step[i] = 0;
      omega[i] = base[i];
    };
    auto next_candidate = [&](int i) {
      ++step[i];
      const std::int64_t k = (step[i] + 1) / 2;
      omega[i] = base[i] + ((step[i] % 2 == 1) ? dir[i] * k : -dir[i] * k);
    };

    int i = n - 1;
    init_level(i);
    while (true) {
      const double d = factor_.row(i)[i] * (static_cast<double>(omega[i]) - center[i]);
      const double dist = partial[i + 1] + d * d;
      if (dist > best_dist + tie_slack()) {
        ++i;
        if (i == n) break;
        next_candidate(i);
        continue;
      }
      if (i == 0) {
        if (dist < best_dist - tie_slack()) {
          best_dist = dist;
          best = omega;
        } else if (std::lexicographical_compare(omega.begin(), omega.end(), best.begin(), best.end())) {
          best_dist = std::min(best_dist, dist);
          best = omega;
        }
        next_candidate(0);
        continue;
      }
      partial[i] = dist;
      --i;
      init_level(i);
    }
    IntVector out(n);
    for (int k = 0; k < n; ++k) out(k) = best[k];
    return out;
  }

  Eigen::VectorXd decode(const Eigen::VectorXd& y) const { return lattice_.point(decode_coordinates(y)); }

 private:
  double level_center(const Eigen::VectorXd& z, const std::vector<std::int64_t>& omega, int i) const {
    const double* row = factor_.row(i);
    double s = z[i];
    for (int j = i + 1; j < factor_.dim(); ++j) s -= row[j] * static_cast<double>(omega[j]);
    return s / row[i];
  }

  Lattice lattice_;
  TriangularFactor factor_;
};

inline Eigen::VectorXd closest_point(const Lattice& lat, const Eigen::VectorXd& y) {
  return SphereDecoder(lat).decode(y);
}

/// Maximum-likelihood coset decision: nearest dense point, labelled by its residue modulo Z.
class CosetDecoder {
 public:
  explicit CosetDecoder(const NestedPair& pair) : decoder_(pair.dense), labeler_(pair.labeler) {}

  std::int64_t decode(const Eigen::VectorXd& y) const { return labeler_.label(decoder_.decode_coordinates(y)); }

 private:
  SphereDecoder decoder_;
  CosetLabeler labeler_;
};

inline std::int64_t coset_decode(const NestedPair& pair, const Eigen::VectorXd& y) {
  return CosetDecoder(pair).decode(y);
}

/// Point of the dense lattice representing the coset with the given label.
inline Eigen::VectorXd coset_representative(const NestedPair& pair, std::int64_t label) {
  return pair.dense.point(pair.labeler.representative(label));
}

}  // namespace latcoset
