#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "latcoset/enumeration.hpp"
#include "latcoset/error.hpp"
#include "latcoset/lattice.hpp"

namespace latcoset {

enum class PsiMethod { direct, poisson_dual, orthogonal_product, e8_closed_form };

constexpr std::string_view to_string(PsiMethod m) noexcept {
  switch (m) {
    case PsiMethod::direct: return "direct";
    case PsiMethod::poisson_dual: return "poisson_dual";
    case PsiMethod::orthogonal_product: return "orthogonal_product";
    case PsiMethod::e8_closed_form: return "e8_closed_form";
  }
  return "unknown";
}

/// psi_L(x) = sum over t in L of exp(-x ||t||^2), with a certified bound on the omitted tail.
struct PsiValue {
  double value = 0.0;
  double excess = 0.0;  // value - 1, accumulated without cancellation where the method allows
  double truncation_bound = 0.0;
  double radius_used = 0.0;
  std::uint64_t points_summed = 0;
  PsiMethod method = PsiMethod::direct;
};

struct PsiOptions {
  std::uint64_t point_cap = kDefaultPointCap;
};

namespace detail {

/// Neumaier summation in the widest hardware float.
class CompensatedSum {
 public:
  void add(long double v) noexcept {
    const long double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  long double value() const noexcept { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

inline double log_sum_exp(std::span<const double> logs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double l : logs) hi = std::max(hi, l);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - hi);
  return hi + std::log(s);
}

/// Upper bound on log Gamma(a, z), the upper incomplete gamma function.
inline double log_upper_gamma(double a, double z) {
  if (z <= 0.0) return std::lgamma(a);
  if (z > a + 40.0) {
    // Gamma(a, z) <= z^(a-1) e^-z * z / (z - a + 1) for a >= 1, and <= z^(a-1) e^-z for a < 1.
    const double corr = (a >= 1.0) ? std::log(z / (z - a + 1.0)) : 0.0;
    return -z + (a - 1.0) * std::log(z) + corr;
  }
  return std::log(boost::math::tgamma(a, z));
}

/// Certified bound on sum_{t in L + c, ||t|| > R} exp(-x ||t||^2) for any coset L + c.
///
/// Let F be the Gram-Schmidt box {sum th_i b*_i : th_i in [-1/2, 1/2)}, a fundamental
/// domain of L with max norm rho = |b*| / 2 and mean squared norm s2 = |b*|^2 / 12.
/// Two tail estimates are taken and the smaller returned:
///  - Jensen: exp(-x|t|^2) <= exp(x s2) / V * int_{t+F} exp(-x|s|^2) ds, and the t + F
///    with |t| > R tile a subset of {|s| > R - rho}.
///  - Shift: exp(-x|t|^2) <= exp(-x (|s| - rho)_+^2) on t + F, integrated over
///    {|s| > R - rho}, valid for R >= 2 rho.
class TailBound {
 public:
  TailBound(const Eigen::VectorXd& gram_schmidt_norms, double volume)
      : n_(static_cast<double>(gram_schmidt_norms.size())), log_volume_(std::log(volume)) {
    const double sq = gram_schmidt_norms.squaredNorm();
    rho_ = 0.5 * std::sqrt(sq);
    mean_sq_ = sq / 12.0;
  }

  double rho() const noexcept { return rho_; }

  double operator()(double x, double radius) const {
    return std::exp(std::min(log_jensen(x, radius), log_shift(x, radius)));
  }

  /// Gaussian-heuristic count of lattice points within radius, Vol(ball) / Vol(L).
  double log_point_estimate(double radius) const {
    const double log_ball = n_ / 2.0 * std::log(std::numbers::pi) - std::lgamma(n_ / 2.0 + 1.0);
    return log_ball + n_ * std::log(radius) - log_volume_;
  }

 private:
  double log_jensen(double x, double radius) const {
    const double r = std::max(radius - rho_, 0.0);
    return x * mean_sq_ - log_volume_ + n_ / 2.0 * std::log(std::numbers::pi) - std::lgamma(n_ / 2.0) -
           n_ / 2.0 * std::log(x) + log_upper_gamma(n_ / 2.0, x * r * r);
  }

  double log_shift(double x, double radius) const {
    const double a = radius - 2.0 * rho_;
    if (a < 0.0) return std::numeric_limits<double>::infinity();
    const int m = static_cast<int>(n_) - 1;
    std::vector<double> terms;
    terms.reserve(m + 1);
    for (int k = 0; k <= m; ++k) {
      const double h = (k + 1) / 2.0;
      double t = std::log(boost::math::binomial_coefficient<double>(m, k)) +
                 std::log(0.5) - h * std::log(x) + log_upper_gamma(h, x * a * a);
      if (m - k > 0) {
        if (rho_ <= 0.0) continue;
        t += (m - k) * std::log(rho_);
      }
      terms.push_back(t);
    }
    const double log_surface = std::log(2.0) + n_ / 2.0 * std::log(std::numbers::pi) - std::lgamma(n_ / 2.0);
    return log_surface - log_volume_ + log_sum_exp(terms);
  }

  double n_;
  double log_volume_;
  double rho_ = 0.0;
  double mean_sq_ = 0.0;
};

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::domain_error, std::string(name) + " must be positive and finite");
  }
}

/// Radius whose tail bound is below tol: grown geometrically from start, then bisected back
/// towards the smallest such radius (never below start).
inline double certified_radius(const TailBound& tail, double x, double tol, double start) {
  double hi = start;
  double lo = start;
  while (!(tail(x, hi) < tol)) {
    lo = hi;
    hi *= 1.1;
    if (hi > 1e8) throw Error(ErrorKind::radius_overflow, "no finite radius certifies the tail");
  }
  if (hi == start) return hi;
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(x, mid) < tol ? hi : lo) = mid;
  }
  return hi;
}

inline void check_point_estimate(const TailBound& tail, double radius, std::uint64_t cap) {
  if (tail.log_point_estimate(radius) > std::log(static_cast<double>(cap))) {
    throw Error(ErrorKind::radius_overflow,
                "radius " + std::to_string(radius) + " needs more than " + std::to_string(cap) +
                    " points; use a larger argument or the dual route");
  }
}

inline double x_switch(const Lattice& lat) {
  return std::numbers::pi * std::pow(lat.volume(), -2.0 / static_cast<double>(lat.dim()));
}

/// Sums exp(-x |t + u|^2) over the ball |t + u| <= radius. Returns (sum of non-origin terms, has origin, count).
struct BallSum {
  long double excess = 0.0L;
  bool has_zero = false;
  std::uint64_t points = 0;
};

inline BallSum gaussian_ball_sum(const TriangularFactor& f, const Eigen::VectorXd& z, double x, double radius,
                                 double slack_tol, std::uint64_t cap) {
  BallSum out;
  CompensatedSum sum;
  const double r2 = radius * radius;
  detail::for_each_in_ball(f, z, r2 + radius_slack(r2, slack_tol), [&](std::span<const std::int64_t>, double dist) {
    if (++out.points > cap) {
      throw Error(ErrorKind::point_count_cap, "more than " + std::to_string(cap) + " points in ball");
    }
    if (dist == 0.0) {
      out.has_zero = true;
    } else {
      sum.add(static_cast<long double>(std::exp(-x * dist)));
    }
  });
  out.excess = sum.value();
  return out;
}

}  // namespace detail

/// Direct summation over an enumerated ball whose radius is grown until the certified tail
/// bound is below tol.
inline PsiValue psi_direct(const Lattice& lat, double x, double tol, const PsiOptions& opts = {}) {
  detail::require_positive(x, "x");
  detail::require_positive(tol, "tol");
  const TriangularFactor f(lat);
  const detail::TailBound tail(f.gram_schmidt_norms(), lat.volume());
  const double radius = detail::certified_radius(tail, x, tol, std::max(2.0, 3.0 / std::sqrt(x)));
  detail::check_point_estimate(tail, radius, opts.point_cap);
  const auto ball = detail::gaussian_ball_sum(f, Eigen::VectorXd::Zero(lat.dim()), x, radius, lat.tol(), opts.point_cap);
  PsiValue out;
  out.excess = static_cast<double>(ball.excess);
  out.value = static_cast<double>(1.0L + ball.excess);
  out.truncation_bound = tail(x, radius);
  out.radius_used = radius;
  out.points_summed = ball.points;
  out.method = PsiMethod::direct;
  return out;
}

/// Poisson route: psi_L(x) = Vol(L)^-1 (pi/x)^(n/2) psi_{L*}(pi^2/x).
inline PsiValue psi_poisson(const Lattice& lat, double x, double tol, const PsiOptions& opts = {}) {
  detail::require_positive(x, "x");
  detail::require_positive(tol, "tol");
  const double ratio = std::numbers::pi / x;
  const double prefactor = std::pow(ratio, static_cast<double>(lat.dim()) / 2.0) / lat.volume();
  const PsiValue inner = psi_direct(dual(lat), std::numbers::pi * ratio, tol / prefactor, opts);
  PsiValue out = inner;
  out.value = prefactor * inner.value;
  out.excess = prefactor * inner.excess + (prefactor - 1.0);
  out.truncation_bound = prefactor * inner.truncation_bound;
  out.method = PsiMethod::poisson_dual;
  return out;
}

/// Direct summation for x >= pi Vol^(-2/n), Poisson route below.
inline PsiValue psi_auto(const Lattice& lat, double x, double tol, const PsiOptions& opts = {}) {
  detail::require_positive(x, "x");
  return x >= detail::x_switch(lat) ? psi_direct(lat, x, tol, opts) : psi_poisson(lat, x, tol, opts);
}

/// sum over t in L of exp(-x ||t + u||^2), enumerated around -u.
inline PsiValue psi_translated(const Lattice& lat, const Eigen::VectorXd& u, double x, double tol,
                               const PsiOptions& opts = {}) {
  detail::require_positive(x, "x");
  detail::require_positive(tol, "tol");
  lat.require_dim(u.size());
  const TriangularFactor f(lat);
  const detail::TailBound tail(f.gram_schmidt_norms(), lat.volume());
  const double radius = detail::certified_radius(tail, x, tol, std::max(2.0, 3.0 / std::sqrt(x)));
  detail::check_point_estimate(tail, radius, opts.point_cap);
  const auto ball = detail::gaussian_ball_sum(f, f.rotate(-u), x, radius, lat.tol(), opts.point_cap);
  PsiValue out;
  const long double total = ball.excess + (ball.has_zero ? 1.0L : 0.0L);
  out.value = static_cast<double>(total);
  out.excess = static_cast<double>(total - 1.0L);
  out.truncation_bound = tail(x, radius);
  out.radius_used = radius;
  out.points_summed = ball.points;
  out.method = PsiMethod::direct;
  return out;
}

// ---------------------------------------------------------------------------
// Jacobi theta functions on the imaginary axis

enum class JacobiKind { theta2 = 2, theta3 = 3, theta4 = 4 };

/// Nome q in [0, 1).
class ThetaArg {
 public:
  explicit ThetaArg(double q) : q_(q) {
    if (!(q >= 0.0 && q < 1.0)) throw Error(ErrorKind::domain_error, "nome must lie in [0, 1)");
  }
  static ThetaArg from_exponent(double s) {
    detail::require_positive(s, "nome exponent");
    return ThetaArg(std::exp(-s));
  }
  double q() const noexcept { return q_; }

 private:
  double q_;
};

struct SeriesValue {
  double value = 0.0;
  double excess = 0.0;  // value minus the constant term (1 for theta3/theta4, 0 for theta2)
  double truncation_bound = 0.0;
  std::uint64_t terms = 0;
};

/// Sums the theta series until the next term drops below tol * 1e-2 * partial sum. The remainder
/// is bounded by a geometric majorant (theta2, theta3) or by the first omitted term (theta4).
inline SeriesValue jacobi_theta_series(JacobiKind kind, ThetaArg arg, double tol) {
  detail::require_positive(tol, "tol");
  const double q = arg.q();
  const long double constant = (kind == JacobiKind::theta2) ? 0.0L : 1.0L;
  SeriesValue out;
  if (q == 0.0) {
    out.value = static_cast<double>(constant);
    return out;
  }
  const double log_q = std::log(q);
  const double offset = (kind == JacobiKind::theta2) ? 0.5 : 0.0;
  const int first = (kind == JacobiKind::theta2) ? 0 : 1;
  long double tail_sum = 0.0L;
  for (int m = first;; ++m) {
    const double e = (m + offset) * (m + offset);
    const double term = std::exp(e * log_q);
    const long double partial = constant + 2.0L * tail_sum;
    if (m > first && term < tol * 1e-2 * static_cast<double>(std::fabs(partial))) {
      if (kind == JacobiKind::theta4) {
        out.truncation_bound = 2.0 * term;
      } else {
        // exponents grow by at least (2 m + 1 + 2 offset) per step
        const double ratio = std::exp((2.0 * (m + offset) + 1.0) * log_q);
        out.truncation_bound = 2.0 * term / (1.0 - ratio);
      }
      break;
    }
    const long double sign = (kind == JacobiKind::theta4 && m % 2 == 1) ? -1.0L : 1.0L;
    tail_sum += sign * static_cast<long double>(term);
    ++out.terms;
    if (term == 0.0) break;
  }
  out.excess = static_cast<double>(2.0L * tail_sum);
  out.value = static_cast<double>(constant + 2.0L * tail_sum);
  return out;
}

inline double jacobi_theta(JacobiKind kind, ThetaArg arg, double tol) {
  return jacobi_theta_series(kind, arg, tol).value;
}

namespace detail {
// Full double precision for the closed forms; their bounds are reported separately.
inline constexpr double kClosedFormSeriesTol = 1e-18;
}  // namespace detail

/// psi of the orthogonal lattice diag(a): prod_i theta3(exp(-a_i^2 x)).
inline PsiValue orthogonal_psi(const Eigen::VectorXd& diagonal, double x, double tol) {
  detail::require_positive(x, "x");
  detail::require_positive(tol, "tol");
  if (diagonal.size() == 0) throw Error(ErrorKind::invalid_argument, "empty diagonal");
  double log_value = 0.0;
  double log_growth = 0.0;  // log prod (1 + b_i / v_i)
  double excess = 0.0;
  std::uint64_t terms = 0;
  for (Eigen::Index i = 0; i < diagonal.size(); ++i) {
    const double a = diagonal(i);
    detail::require_positive(a, "diagonal entry");
    const auto th = jacobi_theta_series(JacobiKind::theta3, ThetaArg(std::exp(-a * a * x)),
                                        std::min(tol, detail::kClosedFormSeriesTol));
    log_value += std::log(th.value);
    log_growth += std::log1p(th.truncation_bound / th.value);
    excess = excess + th.excess + excess * th.excess;
    terms += th.terms;
  }
  PsiValue out;
  out.value = std::exp(log_value);
  out.excess = excess;
  out.truncation_bound = out.value * std::expm1(log_growth);
  out.points_summed = terms;
  out.method = PsiMethod::orthogonal_product;
  return out;
}

/// psi of E8 from its theta series: (theta2^8 + theta3^8 + theta4^8) / 2 at q = exp(-x).
inline PsiValue e8_theta_psi(double x, double tol) {
  detail::require_positive(x, "x");
  detail::require_positive(tol, "tol");
  const ThetaArg q(std::exp(-x));
  const double series_tol = std::min(tol, detail::kClosedFormSeriesTol);
  const auto t2 = jacobi_theta_series(JacobiKind::theta2, q, series_tol);
  const auto t3 = jacobi_theta_series(JacobiKind::theta3, q, series_tol);
  const auto t4 = jacobi_theta_series(JacobiKind::theta4, q, series_tol);
  auto pow8 = [](double v) {
    const double v2 = v * v;
    const double v4 = v2 * v2;
    return v4 * v4;
  };
  auto pow8_excess = [](double e) { return std::expm1(8.0 * std::log1p(e)); };
  auto pow8_spread = [&](const SeriesValue& t) {
    return pow8(std::abs(t.value) + t.truncation_bound) - pow8(std::abs(t.value));
  };
  PsiValue out;
  out.value = 0.5 * (pow8(t2.value) + pow8(t3.value) + pow8(t4.value));
  out.excess = 0.5 * (pow8(t2.value) + pow8_excess(t3.excess) + pow8_excess(t4.excess));
  out.truncation_bound = 0.5 * (pow8_spread(t2) + pow8_spread(t3) + pow8_spread(t4));
  out.points_summed = t2.terms + t3.terms + t4.terms;
  out.method = PsiMethod::e8_closed_form;
  return out;
}

// ---------------------------------------------------------------------------
// Certified differences

/// psi_a(x) - psi_b(x) from ball partial sums. The true difference is at least
/// value - truncation_bound, so value > truncation_bound certifies psi_a > psi_b.
struct PsiGap {
  double value = 0.0;
  double truncation_bound = 0.0;
  double radius_used = 0.0;
  std::uint64_t points_summed = 0;
  PsiMethod method = PsiMethod::direct;

  bool certified_positive() const noexcept { return value > truncation_bound; }
};

struct GapOptions {
  double rel_tol = 1e-6;  // stop once the tail bound is this small relative to the gap
  double abs_tol = 0.0;   // or this small in absolute terms
  std::uint64_t point_cap = kDefaultPointCap;
  double norm_match = 1e-10;  // relative squared-norm difference treated as the same shell
};

namespace detail {

inline std::vector<double> sorted_nonzero_norms(const TriangularFactor& f, double radius, double slack_tol,
                                                std::uint64_t cap, std::uint64_t& points) {
  std::vector<double> norms;
  const double r2 = radius * radius;
  for_each_in_ball(f, Eigen::VectorXd::Zero(f.dim()), r2 + radius_slack(r2, slack_tol),
                   [&](std::span<const std::int64_t>, double dist) {
                     if (++points > cap) {
                       throw Error(ErrorKind::point_count_cap, "gap enumeration exceeded point cap");
                     }
                     if (dist != 0.0) norms.push_back(dist);
                   });
  std::sort(norms.begin(), norms.end());
  return norms;
}

/// sum_i exp(-y a_i) - sum_i exp(-y b_i) with a, b sorted. Terms are paired in order so that
/// coinciding shells cancel exactly and distinct ones are differenced through expm1.
inline long double paired_gaussian_difference(std::span<const double> a, std::span<const double> b, double y,
                                              double norm_match) {
  CompensatedSum sum;
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    const double lo = std::min(a[i], b[i]);
    const double hi = std::max(a[i], b[i]);
    if (hi - lo <= norm_match * hi) continue;
    const long double mag = static_cast<long double>(std::exp(-y * lo)) *
                            static_cast<long double>(-std::expm1(-y * (hi - lo)));
    sum.add(a[i] < b[i] ? mag : -mag);
  }
  for (std::size_t i = common; i < a.size(); ++i) sum.add(std::exp(-y * a[i]));
  for (std::size_t i = common; i < b.size(); ++i) sum.add(-static_cast<long double>(std::exp(-y * b[i])));
  return sum.value();
}

}  // namespace detail

/// Certified psi_a(x) - psi_b(x). For equal volumes and x below the switch point both sums are
/// moved to the dual lattices, where the difference is resolvable at small x.
inline PsiGap psi_gap(const Lattice& a, const Lattice& b, double x, const GapOptions& opts = {}) {
  detail::require_positive(x, "x");
  a.require_dim(b.dim());
  const bool equal_volume = std::abs(a.volume() - b.volume()) <= 1e-10 * std::max(a.volume(), b.volume());
  const bool use_dual = equal_volume && x < detail::x_switch(a);
  const Lattice la = use_dual ? dual(a) : a;
  const Lattice lb = use_dual ? dual(b) : b;
  const double y = use_dual ? std::numbers::pi * (std::numbers::pi / x) : x;
  const double prefactor =
      use_dual ? std::pow(std::numbers::pi / x, static_cast<double>(a.dim()) / 2.0) / a.volume() : 1.0;

  const TriangularFactor fa(la), fb(lb);
  const detail::TailBound ta(fa.gram_schmidt_norms(), la.volume());
  const detail::TailBound tb(fb.gram_schmidt_norms(), lb.volume());
  const double log_cap = std::log(static_cast<double>(opts.point_cap));

  PsiGap out;
  out.method = use_dual ? PsiMethod::poisson_dual : PsiMethod::direct;
  double radius = std::max({1.0, 2.0 * ta.rho(), 2.0 * tb.rho()});
  while (true) {
    if (std::max(ta.log_point_estimate(radius), tb.log_point_estimate(radius)) > log_cap && out.radius_used > 0.0) {
      break;
    }
    std::uint64_t points_a = 0, points_b = 0;
    std::vector<double> na, nb;
    try {
      na = detail::sorted_nonzero_norms(fa, radius, la.tol(), opts.point_cap, points_a);
      nb = detail::sorted_nonzero_norms(fb, radius, lb.tol(), opts.point_cap, points_b);
    } catch (const Error& e) {
      // A refinement that outgrows the cap keeps the last certified result.
      if (e.kind() != ErrorKind::point_count_cap || out.radius_used == 0.0) throw;
      break;
    }
    const std::uint64_t points = points_a + points_b;
    const double diff = static_cast<double>(detail::paired_gaussian_difference(na, nb, y, opts.norm_match));
    const double bound = ta(y, radius) + tb(y, radius);
    out.value = prefactor * diff;
    out.truncation_bound = prefactor * bound;
    out.radius_used = radius;
    out.points_summed = points;
    if (out.truncation_bound <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value))) break;
    radius *= 1.25;
  }
  return out;
}

/// psi_L(x) minus the translated sum at u, via the dual lattice:
/// Vol^-1 (pi/x)^(n/2) sum_{t in L*} exp(-pi^2 |t|^2 / x) * 2 sin^2(pi t.u).
/// Every term is nonnegative, so value is a lower bound and value + truncation_bound an upper one.
inline PsiGap translation_gap(const Lattice& lat, const Eigen::VectorXd& u, double x, const GapOptions& opts = {}) {
  detail::require_positive(x, "x");
  lat.require_dim(u.size());
  const Eigen::VectorXd w = lat.coordinates(u);
  const Lattice d = dual(lat);
  const double y = std::numbers::pi * (std::numbers::pi / x);
  const double prefactor = std::pow(std::numbers::pi / x, static_cast<double>(lat.dim()) / 2.0) / lat.volume();
  const TriangularFactor f(d);
  const detail::TailBound tail(f.gram_schmidt_norms(), d.volume());
  const double log_cap = std::log(static_cast<double>(opts.point_cap));

  PsiGap out;
  out.method = PsiMethod::poisson_dual;
  double radius = std::max(1.0, 2.0 * tail.rho());
  while (true) {
    if (tail.log_point_estimate(radius) > log_cap && out.radius_used > 0.0) break;
    detail::CompensatedSum sum;
    std::uint64_t points = 0;
    const double r2 = radius * radius;
    detail::for_each_in_ball(f, Eigen::VectorXd::Zero(f.dim()), r2 + detail::radius_slack(r2, d.tol()),
                             [&](std::span<const std::int64_t> omega, double dist) {
                               if (++points > opts.point_cap) {
                                 throw Error(ErrorKind::point_count_cap, "gap enumeration exceeded point cap");
                               }
                               if (dist == 0.0) return;
                               long double phase = 0.0L;
                               for (std::size_t j = 0; j < omega.size(); ++j) {
                                 phase += static_cast<long double>(omega[j]) * w(static_cast<Eigen::Index>(j));
                               }
                               phase -= std::round(phase);
                               const double s = std::sin(std::numbers::pi * static_cast<double>(phase));
                               sum.add(2.0L * s * s * std::exp(-y * dist));
                             });
    out.value = prefactor * static_cast<double>(sum.value());
    out.truncation_bound = prefactor * 2.0 * tail(y, radius);
    out.radius_used = radius;
    out.points_summed = points;
    if (out.truncation_bound <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value))) break;
    radius *= 1.25;
  }
  return out;
}

}  // namespace latcoset
