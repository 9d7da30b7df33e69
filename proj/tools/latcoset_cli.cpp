#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latcoset/commands.hpp"
#include "latcoset/latcoset.hpp"

namespace {

using namespace latcoset;

struct Options {
  std::string lattice;
  std::string skew;
  std::string relation;
  std::string grid;
  std::string out;
  std::string which = "both";
  double tol = kDefaultTol;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

Lattice load_lattice(const Options& o) { return Lattice(io::read_matrix_file(o.lattice), o.tol); }

NestedPair load_pair(const Options& o) {
  const Lattice dense = load_lattice(o);
  if (o.relation.empty()) return nest(dense, IntMatrix::Identity(dense.dim(), dense.dim()));
  return nest(dense, io::read_integer_matrix_file(o.relation));
}

std::vector<double> grid_or(const Options& o, const std::string& fallback) {
  return io::grid_values(io::parse_grid(o.grid.empty() ? fallback : o.grid));
}

int emit(const commands::CommandResult& r, const Options& o) {
  if (o.out.empty()) {
    std::cout << r.csv;
    std::cerr << r.summary;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw Error(ErrorKind::io_error, "cannot write '" + o.out + "'");
    file << r.csv;
    std::cout << r.summary;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice coset-coding analysis: psi functions, wiretap bounds, skewing comparisons"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool lattice_required) {
    auto* lat = sub->add_option("--lattice", o.lattice, "lattice generator file (columns are basis vectors)");
    if (lattice_required) lat->required()->check(CLI::ExistingFile);
    sub->add_option("--grid", o.grid, "grid min:max:count:linear|log, or a single value");
    sub->add_option("--tol", o.tol, "truncation tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "CSV output file (default: stdout)");
  };

  auto* psi = app.add_subcommand("psi", "tabulate psi(x) of a lattice");
  add_common(psi, true);

  auto* compare = app.add_subcommand("compare", "compare an orthogonal lattice with a skewing of it");
  add_common(compare, true);
  compare->add_option("--skew", o.skew, "skewing specification file")->required()->check(CLI::ExistingFile);

  auto* bounds = app.add_subcommand("bounds", "ECDP and REP bounds over a sigma grid");
  add_common(bounds, true);
  bounds->add_option("--relation", o.relation, "integer relation matrix file (sparse = dense * Z)")
      ->check(CLI::ExistingFile);
  bounds->add_option("--which", o.which, "ecdp, rep or both")
      ->check(CLI::IsMember({"ecdp", "rep", "both"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo REP (lattice) or coset decision rate (with --relation)");
  add_common(simulate, true);
  simulate->add_option("--relation", o.relation, "integer relation matrix file")->check(CLI::ExistingFile);
  simulate->add_option("--trials", o.trials, "trials per sigma")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "random seed");
  simulate->add_option("--threads", o.threads, "worker threads (0: all cores)");

  auto* demo = app.add_subcommand("e8-demo", "E8 versus its orthogonal counterpart inside Z^8/2");
  add_common(demo, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (psi->parsed()) {
      return emit(commands::cmd_psi(load_lattice(o), grid_or(o, "0.1:5:50:log"), o.tol), o);
    }
    if (compare->parsed()) {
      return emit(commands::cmd_compare(load_lattice(o), io::read_skew_spec_file(o.skew), grid_or(o, "0.1:5:50:log"),
                                        o.tol),
                  o);
    }
    if (bounds->parsed()) {
      if (o.relation.empty() && o.which != "rep") {
        throw Error(ErrorKind::invalid_argument, "--relation is required for ECDP bounds");
      }
      static const std::map<std::string, commands::BoundKind> kinds{
          {"ecdp", commands::BoundKind::ecdp}, {"rep", commands::BoundKind::rep}, {"both", commands::BoundKind::both}};
      return emit(commands::cmd_bounds(load_pair(o), grid_or(o, "0.05:100:40:log"), kinds.at(o.which), o.tol), o);
    }
    if (simulate->parsed()) {
      ChannelConfig cfg;
      cfg.trials = o.trials;
      cfg.seed = o.seed;
      cfg.threads = o.threads;
      const auto sigmas = grid_or(o, "0.1:0.5:5:linear");
      if (o.relation.empty()) return emit(commands::cmd_simulate(load_lattice(o), sigmas, cfg), o);
      return emit(commands::cmd_simulate(load_pair(o), sigmas, cfg), o);
    }
    if (demo->parsed()) {
      return emit(commands::cmd_e8_demo(grid_or(o, "0.1:5:50:log"), o.tol), o);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
