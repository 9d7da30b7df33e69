#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "latcoset/error.hpp"
#include "latcoset/integer_matrix.hpp"

namespace latcoset {

inline constexpr double kDefaultTol = 1e-9;

/// Full-rank lattice given by a square generator matrix whose columns are the basis vectors.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd generator, double tol = kDefaultTol)
      : generator_(std::move(generator)), tol_(tol) {
    if (!(tol_ > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
    }
    if (generator_.rows() != generator_.cols()) {
      throw Error(ErrorKind::non_square, "generator is " + std::to_string(generator_.rows()) + "x" +
                                             std::to_string(generator_.cols()));
    }
    if (generator_.rows() == 0) {
      throw Error(ErrorKind::invalid_argument, "generator is empty");
    }
    if (!generator_.allFinite()) {
      throw Error(ErrorKind::invalid_argument, "generator has non-finite entries");
    }
    lu_.compute(generator_);
    volume_ = std::abs(lu_.determinant());
    if (!(volume_ > tol_)) {
      throw Error(ErrorKind::singular_generator, "|det| = " + std::to_string(volume_) + " <= tol");
    }
  }

  const Eigen::MatrixXd& generator() const noexcept { return generator_; }
  Eigen::Index dim() const noexcept { return generator_.rows(); }
  double tol() const noexcept { return tol_; }
  double volume() const noexcept { return volume_; }

  /// Real lattice coordinates of v, i.e. M^-1 v.
  Eigen::VectorXd coordinates(const Eigen::VectorXd& v) const {
    require_dim(v.size());
    return lu_.solve(v);
  }

  Eigen::MatrixXd coordinates(const Eigen::MatrixXd& vs) const {
    require_dim(vs.rows());
    return lu_.solve(vs);
  }

  Eigen::VectorXd point(const IntVector& w) const {
    require_dim(w.size());
    return generator_ * w.cast<double>();
  }

  Eigen::MatrixXd inverse() const { return lu_.inverse(); }

  void require_dim(Eigen::Index n) const {
    if (n != dim()) {
      throw Error(ErrorKind::dimension_mismatch,
                  "expected dimension " + std::to_string(dim()) + ", got " + std::to_string(n));
    }
  }

 private:
  Eigen::MatrixXd generator_;
  double tol_;
  double volume_ = 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

inline Lattice make_lattice(Eigen::MatrixXd generator, double tol = kDefaultTol) {
  return Lattice(std::move(generator), tol);
}

inline double volume(const Lattice& lat) { return lat.volume(); }

/// Dual lattice, generated by M^-T.
inline Lattice dual(const Lattice& lat) {
  return Lattice(lat.inverse().transpose(), lat.tol());
}

inline Lattice scale(const Lattice& lat, double factor) {
  return Lattice(factor * lat.generator(), lat.tol());
}

/// Rescales the generator so that the volume is one.
inline Lattice normalize_volume(const Lattice& lat) {
  const double n = static_cast<double>(lat.dim());
  return scale(lat, std::pow(lat.volume(), -1.0 / n));
}

namespace detail {

inline bool is_integral(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

template <class Derived>
bool all_integral(const Eigen::MatrixBase<Derived>& m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!is_integral(m(i, j), tol)) return false;
    }
  }
  return true;
}

inline double comparison_tol(const Lattice& a, const Lattice& b) { return std::max(a.tol(), b.tol()); }

}  // namespace detail

/// True iff a and b generate the same point set: U = A^-1 B is integral and unimodular.
inline bool same_lattice(const Lattice& a, const Lattice& b) {
  a.require_dim(b.dim());
  const double tol = detail::comparison_tol(a, b);
  const Eigen::MatrixXd u = a.coordinates(b.generator());
  if (!detail::all_integral(u, tol)) return false;
  return std::abs(std::abs(u.determinant()) - 1.0) <= tol;
}

inline bool contains(const Lattice& lat, const Eigen::VectorXd& v) {
  return detail::all_integral(lat.coordinates(v), lat.tol());
}

/// Diagonal a_1..a_n plus strict upper-triangle entries (row-major) of an upper-triangular generator.
class SkewingSpec {
 public:
  SkewingSpec(Eigen::VectorXd diagonal, Eigen::VectorXd upper)
      : diagonal_(std::move(diagonal)), upper_(std::move(upper)) {
    const Eigen::Index n = diagonal_.size();
    if (n == 0) throw Error(ErrorKind::invalid_argument, "skewing needs at least one diagonal entry");
    if (upper_.size() != n * (n - 1) / 2) {
      throw Error(ErrorKind::dimension_mismatch, "expected " + std::to_string(n * (n - 1) / 2) +
                                                     " upper entries, got " + std::to_string(upper_.size()));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(diagonal_(i) > 0.0) || !std::isfinite(diagonal_(i))) {
        throw Error(ErrorKind::invalid_argument, "skewing diagonal entries must be positive");
      }
    }
    if (!upper_.allFinite()) throw Error(ErrorKind::invalid_argument, "non-finite upper entry");
  }

  /// Reads diagonal and strict upper triangle off an upper-triangular matrix.
  static SkewingSpec from_upper_triangular(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd upper(n * (n - 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) upper(k++) = m(i, j);
    }
    return SkewingSpec(m.diagonal(), upper);
  }

  Eigen::Index dim() const noexcept { return diagonal_.size(); }
  const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }

  Eigen::MatrixXd generator() const {
    const Eigen::Index n = dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m.diagonal() = diagonal_;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = upper_(k++);
    }
    return m;
  }

 private:
  Eigen::VectorXd diagonal_;
  Eigen::VectorXd upper_;
};

inline Lattice skewing_to_lattice(const SkewingSpec& spec, double tol = kDefaultTol) {
  return Lattice(spec.generator(), tol);
}

/// Diagonal of the generator when it is diagonal with positive entries (within tol).
inline std::optional<Eigen::VectorXd> orthogonal_diagonal(const Lattice& lat) {
  const Eigen::MatrixXd& m = lat.generator();
  const double scale = m.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && std::abs(m(i, j)) > lat.tol() * std::max(1.0, scale)) return std::nullopt;
    }
    if (!(m(j, j) > 0.0)) return std::nullopt;
  }
  return Eigen::VectorXd(m.diagonal());
}

inline Eigen::VectorXd require_orthogonal(const Lattice& lat) {
  auto diag = orthogonal_diagonal(lat);
  if (!diag) throw Error(ErrorKind::not_orthogonal, "generator is not diagonal with positive entries");
  return *diag;
}

/// Finds an upper-triangular basis with positive diagonal, if the lattice has one.
///
/// Rows are cleared bottom-up. For row i only columns 0..i are touched, and a real
/// Euclidean algorithm (integer column operations) leaves a single nonzero entry,
/// which is moved to column i and made positive. Entries below tol * max|M| are
/// snapped to zero; the result is accepted only if it generates the same lattice,
/// so a snap of a genuinely nonzero entry is detected. Row i fails to reduce when
/// its entries are incommensurable, i.e. no triangular basis exists.
///
/// The diagonal of any upper-triangular basis is unique up to sign
/// (|d_k| = Vol(L_k) / Vol(L_{k-1}) for the flag of sections L_k = L cap R^k),
/// so comparing it with a target diagonal is basis-independent.
inline std::optional<Eigen::MatrixXd> upper_triangular_basis(const Lattice& lat, int max_steps_per_row = 256) {
  Eigen::MatrixXd b = lat.generator();
  const Eigen::Index n = b.rows();
  const double eps = lat.tol() * std::max(1.0, b.cwiseAbs().maxCoeff());
  constexpr double kMaxMultiplier = 4503599627370496.0;  // 2^52

  for (Eigen::Index i = n - 1; i >= 0; --i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      if (std::abs(b(i, j)) <= eps) b(i, j) = 0.0;
    }
    bool reduced = false;
    for (int step = 0; step < max_steps_per_row; ++step) {
      Eigen::Index pivot = -1;
      int nonzero = 0;
      for (Eigen::Index j = 0; j <= i; ++j) {
        if (b(i, j) == 0.0) continue;
        ++nonzero;
        if (pivot < 0 || std::abs(b(i, j)) < std::abs(b(i, pivot))) pivot = j;
      }
      if (pivot < 0) return std::nullopt;
      if (nonzero == 1) {
        if (pivot != i) b.col(pivot).swap(b.col(i));
        reduced = true;
        break;
      }
      for (Eigen::Index j = 0; j <= i; ++j) {
        if (j == pivot || b(i, j) == 0.0) continue;
        const double c = std::round(b(i, j) / b(i, pivot));
        if (std::abs(c) > kMaxMultiplier) return std::nullopt;
        b.col(j) -= c * b.col(pivot);
        if (std::abs(b(i, j)) <= eps) b(i, j) = 0.0;
      }
    }
    if (!reduced) return std::nullopt;
    if (b(i, i) < 0.0) b.col(i) = -b.col(i);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) b(i, j) = 0.0;
  }
  if (!(std::abs(b.diagonal().prod()) > lat.tol())) return std::nullopt;
  const Lattice triangular(b, lat.tol());
  if (!same_lattice(lat, triangular)) return std::nullopt;
  return b;
}

/// True iff cand has an upper-triangular basis with exactly orth's diagonal (same order)
/// and is a different point set from orth.
inline bool is_skewing(const Lattice& cand, const Lattice& orth) {
  const Eigen::VectorXd diag = require_orthogonal(orth);
  cand.require_dim(orth.dim());
  const auto tri = upper_triangular_basis(cand);
  if (!tri) return false;
  const double tol = detail::comparison_tol(cand, orth);
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs((*tri)(i, i) - diag(i)) > tol * std::max(1.0, diag(i))) return false;
  }
  return !same_lattice(cand, orth);
}

/// Dense lattice with a sublattice generated by dense.generator() * relation.
struct NestedPair {
  Lattice dense;
  IntMatrix relation;
  Lattice sparse;
  std::int64_t index;  // |det relation| = |dense / sparse|
  CosetLabeler labeler;

  Eigen::Index dim() const noexcept { return dense.dim(); }
};

inline NestedPair nest(const Lattice& dense, const IntMatrix& relation) {
  if (relation.rows() != relation.cols()) {
    throw Error(ErrorKind::non_square, "relation matrix must be square");
  }
  dense.require_dim(relation.rows());
  const std::int64_t det = determinant(relation);
  if (det == 0) throw Error(ErrorKind::singular_relation, "relation matrix has zero determinant");
  Lattice sparse(dense.generator() * relation.cast<double>(), dense.tol());
  CosetLabeler labeler(hermite_normal_form(relation));
  return NestedPair{dense, relation, std::move(sparse), std::abs(det), std::move(labeler)};
}

/// Integer relation Z with sparse = dense * Z; throws NotSublattice if none exists.
inline IntMatrix relation_between(const Lattice& dense, const Lattice& sparse) {
  dense.require_dim(sparse.dim());
  const Eigen::MatrixXd u = dense.coordinates(sparse.generator());
  const double tol = detail::comparison_tol(dense, sparse);
  if (!detail::all_integral(u, tol)) {
    throw Error(ErrorKind::not_sublattice, "sparse generator has non-integral dense coordinates");
  }
  return u.array().round().cast<std::int64_t>().matrix();
}

inline NestedPair nest(const Lattice& dense, const Lattice& sparse) {
  return nest(dense, relation_between(dense, sparse));
}

/// Sublattice of an orthogonal lattice with relation upper-triangular, diagonal 2^k and the
/// given strict upper entries (row-major). The sparse lattice is a skewing of 2^k * dense_orth
/// or equal to it.
inline NestedPair skewed_sublattice(const Lattice& dense_orth, int k, std::span<const std::int64_t> upper) {
  require_orthogonal(dense_orth);
  if (k < 1 || k > 30) throw Error(ErrorKind::invalid_argument, "k must be in [1, 30]");
  const Eigen::Index n = dense_orth.dim();
  if (static_cast<Eigen::Index>(upper.size()) != n * (n - 1) / 2) {
    throw Error(ErrorKind::dimension_mismatch, "expected " + std::to_string(n * (n - 1) / 2) + " upper entries");
  }
  IntMatrix z = IntMatrix::Zero(n, n);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i, i) = std::int64_t{1} << k;
    for (Eigen::Index j = i + 1; j < n; ++j) z(i, j) = upper[idx++];
  }
  NestedPair pair = nest(dense_orth, z);
  const Lattice scaled = scale(dense_orth, static_cast<double>(std::int64_t{1} << k));
  if (!is_skewing(pair.sparse, scaled) && !same_lattice(pair.sparse, scaled)) {
    throw Error(ErrorKind::invalid_argument, "skewed sublattice postcondition failed");
  }
  return pair;
}

}  // namespace latcoset
