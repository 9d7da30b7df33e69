#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "latcoset/constructions.hpp"
#include "latcoset/enumeration.hpp"
#include "latcoset/io.hpp"
#include "latcoset/lattice.hpp"
#include "latcoset/simulator.hpp"
#include "latcoset/theta.hpp"
#include "latcoset/wiretap.hpp"

namespace latcoset::commands {

/// CSV payload, human-readable summary, and the process exit status.
struct CommandResult {
  std::string csv;
  std::string summary;
  int exit_code = 0;
};

enum class BoundKind { ecdp, rep, both };

inline CommandResult cmd_psi(const Lattice& lat, const std::vector<double>& grid, double tol) {
  io::CsvWriter csv({"x", "psi", "truncation_bound", "method"});
  for (double x : grid) {
    const PsiValue p = psi_auto(lat, x, tol);
    csv.row(x, p.value, p.truncation_bound, to_string(p.method));
  }
  return {csv.str(), "", 0};
}

/// Exit status 1 when the skewed psi is not certified below the orthogonal psi at some point.
inline CommandResult cmd_compare(const Lattice& orth, const SkewingSpec& spec, const std::vector<double>& grid,
                                 double tol) {
  const SkewingComparison cmp = compare_skewing(orth, spec, grid, tol);
  io::CsvWriter csv({"x", "psi_orth", "psi_skew", "margin", "margin_bound"});
  std::size_t failures = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PsiGap& g = cmp.gaps[i];
    csv.row(grid[i], cmp.orthogonal.values[i], cmp.skewed.values[i], g.value, g.truncation_bound);
    if (!g.certified_positive()) ++failures;
  }
  std::ostringstream summary;
  summary << (failures == 0 ? "PASS" : "FAIL") << " strict ordering psi_skew < psi_orth at " << grid.size() - failures
          << "/" << grid.size() << " grid points\n";
  return {csv.str(), summary.str(), failures == 0 ? 0 : 1};
}

inline CommandResult cmd_bounds(const NestedPair& pair, const std::vector<double>& sigmas, BoundKind which,
                                double tol) {
  const CosetCode code = make_coset_code(pair);
  if (which == BoundKind::both) {
    io::CsvWriter csv({"sigma", "ecdp", "ecdp_capped", "rep", "rep_capped"});
    for (double s : sigmas) {
      const BoundValue e = ecdp_bound(code, s, tol);
      const double r = rep_bound(pair.dense, s, tol);
      csv.row(s, e.value, e.capped, r, r > 1.0);
    }
    return {csv.str(), "", 0};
  }
  io::CsvWriter csv({"sigma", "value", "capped"});
  for (double s : sigmas) {
    if (which == BoundKind::ecdp) {
      const BoundValue e = ecdp_bound(code, s, tol);
      csv.row(s, e.value, e.capped);
    } else {
      const double r = rep_bound(pair.dense, s, tol);
      csv.row(s, r, r > 1.0);
    }
  }
  return {csv.str(), "", 0};
}

namespace detail {
inline CommandResult simulation_csv(const std::vector<double>& sigmas, const std::vector<SimResult>& results) {
  io::CsvWriter csv({"sigma", "estimate", "stderr", "trials"});
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    csv.row(sigmas[i], results[i].estimate, results[i].std_error, results[i].trials);
  }
  return {csv.str(), "", 0};
}
}  // namespace detail

/// Receiver error rate of a lattice code.
inline CommandResult cmd_simulate(const Lattice& lat, const std::vector<double>& sigmas, const ChannelConfig& cfg) {
  return detail::simulation_csv(sigmas, sweep(lat, sigmas, cfg));
}

/// Coset decision rate of a nested pair.
inline CommandResult cmd_simulate(const NestedPair& pair, const std::vector<double>& sigmas, const ChannelConfig& cfg) {
  return detail::simulation_csv(sigmas, sweep(make_coset_code(pair), sigmas, cfg));
}

/// E8 against diag(2, 1, ..., 1, 1/2), both as index-256 sublattices of Z^8 / 2.
inline CommandResult cmd_e8_demo(const std::vector<double>& grid, double tol) {
  constexpr double kClosedFormAgreement = 1e-8;
  constexpr double kAgreementFromX = 0.5;

  std::ostringstream summary;
  bool all_pass = true;
  auto check = [&](bool ok, const std::string& what) {
    summary << (ok ? "PASS " : "FAIL ") << what << '\n';
    all_pass = all_pass && ok;
  };

  const Lattice e8 = e8_lattice();
  const Lattice orth = diagonal_lattice(e8_orthogonal_diagonal());
  const Lattice half = scale(integer_lattice(8), 0.5);

  check(std::abs(e8.volume() - 1.0) <= 1e-12, "E8 |det| = 1");
  check(same_lattice(dual(e8), e8), "E8 is self-dual");
  check(is_skewing(e8, orth), "E8 is a skewing of diag(2,1,1,1,1,1,1,1/2)");

  const CosetCode code_e8 = make_coset_code(nest(half, e8));
  const CosetCode code_orth = make_coset_code(nest(half, orth));
  check(code_e8.pair.index == 256 && code_orth.pair.index == 256, "index 256 in Z^8/2 for both sublattices");
  check(rate(code_e8) == 1.0 && rate(code_orth) == 1.0, "equal rates of 1 bpcu");

  const ShellTable shells = enumerate(e8, 2.0);
  const bool shells_ok = shells.entries.size() == 3 && shells.entries[0].count == 1 &&
                         std::abs(shells.entries[1].norm_sq - 2.0) < 1e-9 && shells.entries[1].count == 240 &&
                         std::abs(shells.entries[2].norm_sq - 4.0) < 1e-9 && shells.entries[2].count == 2160;
  check(shells_ok, "E8 shells (0,1) (2,240) (4,2160)");

  io::CsvWriter csv({"x", "psi_orth", "psi_e8", "psi_e8_closed_form", "margin", "margin_bound"});
  std::size_t strict = 0;
  bool agree = true;
  double worst = 0.0;
  for (double x : grid) {
    const PsiValue po = orthogonal_psi(e8_orthogonal_diagonal(), x, tol);
    const PsiValue pe = psi_auto(e8, x, tol);
    const PsiValue pc = e8_theta_psi(x, tol);
    const PsiGap gap = psi_gap(orth, e8, x);
    csv.row(x, po.value, pe.value, pc.value, gap.value, gap.truncation_bound);
    if (gap.certified_positive()) ++strict;
    if (x >= kAgreementFromX) {
      const double diff = std::abs(pe.value - pc.value);
      worst = std::max(worst, diff);
      agree = agree && diff <= kClosedFormAgreement;
    }
  }
  check(strict == grid.size(), "psi_E8 < psi_orth at " + std::to_string(strict) + "/" + std::to_string(grid.size()) +
                                   " grid points");
  std::ostringstream agreement;
  agreement << "closed form matches enumeration for x >= 0.5 (max |diff| = " << io::format_double(worst) << ")";
  check(agree, agreement.str());
  return {csv.str(), summary.str(), all_pass ? 0 : 1};
}

}  // namespace latcoset::commands
