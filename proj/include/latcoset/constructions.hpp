#pragma once

#include <vector>

#include <Eigen/Dense>

#include "latcoset/lattice.hpp"

namespace latcoset {

inline Lattice integer_lattice(Eigen::Index n, double tol = kDefaultTol) {
  return Lattice(Eigen::MatrixXd::Identity(n, n), tol);
}

inline Lattice diagonal_lattice(const Eigen::VectorXd& diagonal, double tol = kDefaultTol) {
  return Lattice(Eigen::MatrixXd(diagonal.asDiagonal()), tol);
}

/// Gosset lattice E8 in its upper-triangular basis: columns 2e1, e_{i+1} - e_i (i = 1..6),
/// and the all-halves vector.
inline Eigen::MatrixXd e8_generator() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  m(0, 0) = 2.0;
  for (int j = 1; j < 7; ++j) {
    m(j - 1, j) = -1.0;
    m(j, j) = 1.0;
  }
  m.col(7).setConstant(0.5);
  return m;
}

inline Lattice e8_lattice(double tol = kDefaultTol) { return Lattice(e8_generator(), tol); }

/// diag(2, 1, 1, 1, 1, 1, 1, 1/2): the orthogonal lattice E8 skews.
inline Eigen::VectorXd e8_orthogonal_diagonal() {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(8);
  d(0) = 2.0;
  d(7) = 0.5;
  return d;
}

inline SkewingSpec e8_skewing_spec() { return SkewingSpec::from_upper_triangular(e8_generator()); }

}  // namespace latcoset
