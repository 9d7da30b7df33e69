#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "latcoset/error.hpp"
#include "latcoset/lattice.hpp"
#include "latcoset/theta.hpp"

namespace latcoset {

/// Coset code over a nested pair: messages are the cosets of sparse in dense.
struct CosetCode {
  NestedPair pair;
  double rate_bpcu;  // log2(index) / n
};

inline CosetCode make_coset_code(NestedPair pair) {
  const double r = std::log2(static_cast<double>(pair.index)) / static_cast<double>(pair.dim());
  return CosetCode{std::move(pair), r};
}

inline double rate(const CosetCode& code) { return code.rate_bpcu; }

struct BoundValue {
  double value = 0.0;
  bool capped = false;  // value > 1: valid but uninformative
  PsiValue psi;
};

/// Values of a bound (or psi) over a sweep grid.
struct BoundReport {
  std::vector<double> x_grid;
  std::vector<double> values;
  std::vector<bool> capped;
};

/// Eavesdropper's correct-decision probability bound
/// Vol(dense) / (sqrt(2 pi) sigma_e)^n * psi_sparse(1 / (2 sigma_e^2)).
inline BoundValue ecdp_bound(const CosetCode& code, double sigma_e, double tol = kDefaultTol,
                             const PsiOptions& opts = {}) {
  detail::require_positive(sigma_e, "sigma_e");
  const double n = static_cast<double>(code.pair.dim());
  BoundValue out;
  out.psi = psi_auto(code.pair.sparse, 1.0 / (2.0 * sigma_e * sigma_e), tol, opts);
  const double log_pre = std::log(code.pair.dense.volume()) - n * std::log(std::sqrt(2.0 * std::numbers::pi) * sigma_e);
  out.value = std::exp(log_pre) * out.psi.value;
  out.capped = out.value > 1.0;
  return out;
}

/// Union bound on the legitimate receiver's error probability: (psi(1 / (8 sigma_b^2)) - 1) / 2.
inline double rep_bound(const Lattice& lat, double sigma_b, double tol = kDefaultTol, const PsiOptions& opts = {}) {
  detail::require_positive(sigma_b, "sigma_b");
  const PsiValue psi = psi_auto(lat, 1.0 / (8.0 * sigma_b * sigma_b), tol, opts);
  return 0.5 * psi.excess;
}

inline BoundReport ecdp_report(const CosetCode& code, const std::vector<double>& sigmas, double tol = kDefaultTol) {
  BoundReport r;
  for (double s : sigmas) {
    const auto b = ecdp_bound(code, s, tol);
    r.x_grid.push_back(s);
    r.values.push_back(b.value);
    r.capped.push_back(b.capped);
  }
  return r;
}

inline BoundReport rep_report(const Lattice& lat, const std::vector<double>& sigmas, double tol = kDefaultTol) {
  BoundReport r;
  for (double s : sigmas) {
    const double v = rep_bound(lat, s, tol);
    r.x_grid.push_back(s);
    r.values.push_back(v);
    r.capped.push_back(v > 1.0);
  }
  return r;
}

/// psi of an orthogonal lattice and one of its skewings over a grid, with the certified
/// gap psi_orth - psi_skew at each point.
struct SkewingComparison {
  BoundReport orthogonal;
  BoundReport skewed;
  std::vector<PsiGap> gaps;

  bool all_strict() const {
    for (const auto& g : gaps) {
      if (!g.certified_positive()) return false;
    }
    return true;
  }
};

inline SkewingComparison compare_skewing(const Lattice& orth, const SkewingSpec& spec, const std::vector<double>& x_grid,
                                         double tol = kDefaultTol) {
  const Eigen::VectorXd diag = require_orthogonal(orth);
  if (spec.dim() != orth.dim()) throw Error(ErrorKind::not_a_skewing, "dimension differs from orthogonal lattice");
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(spec.diagonal()(i) - diag(i)) > orth.tol() * std::max(1.0, diag(i))) {
      throw Error(ErrorKind::not_a_skewing, "skewing diagonal differs from orthogonal diagonal");
    }
  }
  const Lattice skew = skewing_to_lattice(spec, orth.tol());
  if (!is_skewing(skew, orth)) throw Error(ErrorKind::not_a_skewing, "lattice equals the orthogonal lattice");

  SkewingComparison out;
  for (double x : x_grid) {
    const PsiValue po = orthogonal_psi(diag, x, tol);
    const PsiValue ps = psi_auto(skew, x, tol);
    out.orthogonal.x_grid.push_back(x);
    out.orthogonal.values.push_back(po.value);
    out.orthogonal.capped.push_back(false);
    out.skewed.x_grid.push_back(x);
    out.skewed.values.push_back(ps.value);
    out.skewed.capped.push_back(false);
    out.gaps.push_back(psi_gap(orth, skew, x));
  }
  return out;
}

}  // namespace latcoset
