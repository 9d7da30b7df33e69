#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "latcoset/error.hpp"

namespace latcoset {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t checked_narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw Error(ErrorKind::invalid_argument, "integer overflow in relation-matrix arithmetic");
  }
  return static_cast<std::int64_t>(v);
}

// col_j -= factor * col_p, rows [0, rows)
inline void column_axpy(IntMatrix& m, Eigen::Index j, Eigen::Index p, std::int64_t factor) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    m(r, j) = checked_narrow(static_cast<__int128>(m(r, j)) - static_cast<__int128>(factor) * m(r, p));
  }
}

}  // namespace detail

/// Exact determinant by fraction-free (Bareiss) elimination.
inline std::int64_t determinant(const IntMatrix& z) {
  if (z.rows() != z.cols()) {
    throw Error(ErrorKind::non_square, "relation matrix is " + std::to_string(z.rows()) + "x" +
                                           std::to_string(z.cols()));
  }
  const Eigen::Index n = z.rows();
  if (n == 0) return 1;
  Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a = z.cast<__int128>();
  __int128 prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap_row = -1;
      for (Eigen::Index r = k + 1; r < n; ++r) {
        if (a(r, k) != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      a.row(k).swap(a.row(swap_row));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return detail::checked_narrow(sign * a(n - 1, n - 1));
}

/// Upper-triangular column Hermite normal form H = Z U (U unimodular):
/// positive diagonal, and 0 <= H(i, j) < H(i, i) for every j > i.
inline IntMatrix hermite_normal_form(const IntMatrix& z) {
  if (z.rows() != z.cols()) {
    throw Error(ErrorKind::non_square, "relation matrix must be square");
  }
  IntMatrix h = z;
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    while (true) {
      Eigen::Index pivot = -1;
      int nonzero = 0;
      for (Eigen::Index j = 0; j <= i; ++j) {
        if (h(i, j) == 0) continue;
        ++nonzero;
        if (pivot < 0 || std::llabs(h(i, j)) < std::llabs(h(i, pivot))) pivot = j;
      }
      if (pivot < 0) {
        throw Error(ErrorKind::singular_relation, "relation matrix is singular");
      }
      if (nonzero == 1) {
        if (pivot != i) h.col(pivot).swap(h.col(i));
        break;
      }
      for (Eigen::Index j = 0; j <= i; ++j) {
        if (j == pivot || h(i, j) == 0) continue;
        detail::column_axpy(h, j, pivot, h(i, j) / h(i, pivot));
      }
    }
    if (h(i, i) < 0) h.col(i) = -h.col(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const std::int64_t q = detail::floor_div(h(i, j), h(i, i));
      if (q != 0) detail::column_axpy(h, j, i, q);
    }
  }
  return h;
}

/// Canonical coset labelling of Z^n / H Z^n for an upper-triangular Hermite form H.
/// Labels run over [0, det H) in mixed radix with digit i in [0, H(i, i)).
class CosetLabeler {
 public:
  CosetLabeler() = default;
  explicit CosetLabeler(IntMatrix hermite) : hermite_(std::move(hermite)) {
    const Eigen::Index n = hermite_.rows();
    strides_.resize(n);
    std::int64_t stride = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      strides_(i) = stride;
      stride = detail::checked_narrow(static_cast<__int128>(stride) * hermite_(i, i));
    }
    count_ = stride;
  }

  std::int64_t count() const noexcept { return count_; }
  const IntMatrix& hermite() const noexcept { return hermite_; }

  /// Reduces coordinates into the canonical box 0 <= w_i < H(i, i).
  IntVector residue(IntVector w) const {
    for (Eigen::Index i = hermite_.rows() - 1; i >= 0; --i) {
      const std::int64_t q = detail::floor_div(w(i), hermite_(i, i));
      if (q != 0) w -= q * hermite_.col(i);
    }
    return w;
  }

  std::int64_t label(const IntVector& w) const {
    const IntVector r = residue(w);
    std::int64_t label = 0;
    for (Eigen::Index i = 0; i < r.size(); ++i) label += r(i) * strides_(i);
    return label;
  }

  IntVector representative(std::int64_t label) const {
    if (label < 0 || label >= count_) {
      throw Error(ErrorKind::invalid_argument, "coset label " + std::to_string(label) + " out of range");
    }
    IntVector w(hermite_.rows());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w(i) = (label / strides_(i)) % hermite_(i, i);
    }
    return w;
  }

 private:
  IntMatrix hermite_;
  IntVector strides_;
  std::int64_t count_ = 0;
};

}  // namespace latcoset
