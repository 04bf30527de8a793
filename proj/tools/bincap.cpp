// Command-line front end for the binomial channel library.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "bincap/bounds.hpp"
#include "bincap/info_density.hpp"
#include "bincap/oracles.hpp"
#include "bincap/report_io.hpp"
#include "bincap/solver.hpp"

namespace {

using namespace bincap;

constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;

struct Options {
  int n = 0;
  int n_min = 1;
  int n_max = 0;
  std::string format = "json";
  std::string out;
  std::string dist;
  bool bits = false;
  int points = 0;
  int grid = 0;
  SolverConfig solver;
  bool no_symmetrize = false;
};

double to_display(double nats, bool bits) { return bits ? nats / std::numbers::ln2 : nats; }
const char* unit(bool bits) { return bits ? "bits" : "nats"; }

std::vector<double> uniform(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) g[static_cast<std::size_t>(j)] = static_cast<double>(j) / (points - 1);
  return g;
}

int cert_grid(const SolverConfig& c) { return 10 * (c.grid_size - 1) + 1; }

// Writes through a temporary file and renames, so readers never see a partial file.
void emit(const Options& o, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::filesystem::path path(o.out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("BINCAP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / path;
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    body(os);
    if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

DiscreteInput load_input(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw std::invalid_argument("cannot read distribution file " + file);
  return read_input_json(is);
}

int cmd_solve(const Options& o) {
  const ChannelSpec spec(o.n);
  const SolveReport r = solve_capacity(spec, o.solver);
  const KktSummary flags = kkt_verify(r, spec, cert_grid(o.solver), o.solver.kkt_tol);
  emit(o, [&](std::ostream& os) {
    if (o.format == "csv") {
      os << "x,weight\n";
      for (std::size_t k = 0; k < r.input.size(); ++k) {
        fmt::print(os, "{:.17g},{:.17g}\n", r.input.points()[k], r.input.weights()[k]);
      }
    } else {
      write_json(os, r, flags);
    }
  });
  if (o.bits) {
    fmt::print(stderr, "n={} C={:.12f} {} support={} slack={:.3g}\n", o.n, to_display(r.capacity_nats, true),
               unit(true), r.support_size, r.kkt_slack);
  }
  return r.converged ? 0 : kExitNotConverged;
}

int cmd_bounds(const Options& o) {
  std::vector<BoundsReport> rows;
  if (o.n > 0) {
    rows.push_back(make_bounds_report(o.n));
  } else {
    for (int n = o.n_min; n <= o.n_max; ++n) rows.push_back(make_bounds_report(n));
  }
  emit(o, [&](std::ostream& os) {
    if (o.format == "csv") {
      write_bounds_csv(os, rows);
    } else if (o.n > 0) {
      write_json(os, rows.front());
    } else {
      write_json(os, rows);
    }
  });
  if (o.bits) {
    for (const auto& b : rows) {
      fmt::print(stderr, "n={} lower={:.12f} upper={:.12f} {}\n", b.n, to_display(b.cap_lower, true),
                 to_display(b.cap_upper, true), unit(true));
    }
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const ChannelSpec spec(o.n);
  const DiscreteInput input = load_input(o.dist);
  const int grid = o.grid > 0 ? o.grid : cert_grid(SolverConfig{});
  const SolveReport r = evaluate_input(spec, input, grid, o.solver.kkt_tol);
  const KktSummary s = kkt_verify(r, spec, grid, o.solver.kkt_tol);
  emit(o, [&](std::ostream& os) { write_json(os, s, o.n, r.capacity_nats); });
  if (o.bits) {
    fmt::print(stderr, "n={} I={:.12f} {} slack={:.3g} pass={}\n", o.n, to_display(r.capacity_nats, true),
               unit(true), s.slack, s.all_pass());
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  std::vector<SweepRow> rows;
  bool all = true;
  for (int n = o.n_min; n <= o.n_max; ++n) {
    const SolveReport r = solve_capacity(ChannelSpec(n), o.solver);
    all = all && r.converged;
    rows.push_back({make_bounds_report(n, r.capacity_nats), r.capacity_nats, r.support_size, r.kkt_slack,
                    r.converged});
    if (o.bits) {
      fmt::print(stderr, "n={} C={:.12f} {}\n", n, to_display(r.capacity_nats, true), unit(true));
    }
  }
  emit(o, [&](std::ostream& os) {
    if (o.format == "json") {
      os << "[\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        fmt::print(os,
                   "  {{\"n\": {}, \"cap_lower\": {}, \"capacity_nats\": {}, \"cap_upper\": {}, "
                   "\"card_lower\": {}, \"support_size\": {}, \"card_upper\": {}, \"kkt_slack\": {}, "
                   "\"converged\": {}}}{}\n",
                   r.bounds.n, json_number(r.bounds.cap_lower), json_number(r.capacity_nats),
                   json_number(r.bounds.cap_upper), json_number(r.bounds.card_lower), r.support_size,
                   r.bounds.card_upper, json_number(r.kkt_slack), r.converged ? "true" : "false",
                   i + 1 < rows.size() ? "," : "");
      }
      os << "]\n";
    } else {
      write_sweep_csv(os, rows);
    }
  });
  return all ? 0 : kExitNotConverged;
}

int cmd_table(const Options& o) {
  const std::vector<ExactSolution> fixtures{exact_solution(1), exact_solution(2), exact_solution(3)};
  emit(o, [&](std::ostream& os) {
    if (o.format == "csv") {
      os << "n,x,weight,capacity_nats\n";
      for (const auto& f : fixtures) {
        const DiscreteInput in = f.input();
        for (std::size_t k = 0; k < in.size(); ++k) {
          fmt::print(os, "{},{:.17g},{:.17g},{:.17g}\n", f.n, in.points()[k], in.weights()[k], f.capacity_nats());
        }
      }
    } else {
      write_json(os, fixtures);
    }
  });
  return 0;
}

int cmd_curves(const Options& o) {
  const ChannelSpec spec(o.n);
  bool converged = true;
  std::optional<DiscreteInput> input;
  if (!o.dist.empty()) {
    input.emplace(load_input(o.dist));
  } else {
    const SolveReport r = solve_capacity(spec, o.solver);
    converged = r.converged;
    input.emplace(r.input);
  }
  const auto grid = uniform(o.points > 0 ? o.points : 1001);
  const DensityCurve curve = make_density_curve(*input, spec, grid);
  auto cell = [](double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : std::string(); };
  emit(o, [&](std::ostream& os) {
    os << "x,i,i_prime,i_second,lb1,lb2\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid[j];
      const bool interior = x > 0.0 && x < 1.0;
      const std::string lb1 = interior ? cell(crest_factor_lb1(o.n, x)) : std::string();
      const std::string lb2 = interior && x != 0.5 ? cell(crest_factor_lb2(o.n, x)) : std::string();
      fmt::print(os, "{:.17g},{},{},{},{},{}\n", x, cell(curve.values[j]), cell(curve.d1[j]),
                 cell(curve.d2[j]), lb1, lb2);
    }
  });
  return converged ? 0 : kExitNotConverged;
}

int cmd_entropy(const Options& o) {
  const ChannelSpec spec(o.n);
  const auto grid = uniform(o.points > 0 ? o.points : 201);
  emit(o, [&](std::ostream& os) { write_entropy_csv(os, spec, grid); });
  return 0;
}

void add_solver_options(CLI::App* app, Options& o) {
  app->add_option("--grid-size", o.solver.grid_size, "seed grid size (odd)")->capture_default_str();
  app->add_option("--ba-tol", o.solver.ba_tol, "weight iteration gap tolerance (nats)")->capture_default_str();
  app->add_option("--kkt-tol", o.solver.kkt_tol, "certified slack target (nats)")->capture_default_str();
  app->add_option("--merge-radius", o.solver.merge_radius, "atom clustering distance")->capture_default_str();
  app->add_option("--prune-weight", o.solver.prune_weight, "atom drop threshold")->capture_default_str();
  app->add_option("--max-outer", o.solver.max_outer_iters, "outer iteration cap")->capture_default_str();
  app->add_flag("--no-symmetrize", o.no_symmetrize, "do not mirror-average iterates");
}

void add_output_options(CLI::App* app, Options& o, bool formats = true) {
  if (formats) {
    app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  }
  app->add_option("--out", o.out, "output file (default stdout; relative paths use $BINCAP_OUTPUT_DIR)");
  app->add_flag("--bits", o.bits, "also print a summary in bits on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity, optimal inputs and bounds for the binomial channel"};
  app.require_subcommand(1);
  Options o;
  const auto positive = CLI::Range(1, kMaxTrials);

  auto* solve = app.add_subcommand("solve", "compute capacity and the optimal input");
  solve->add_option("--n", o.n, "number of trials")->required()->check(positive);
  add_solver_options(solve, o);
  add_output_options(solve, o);

  auto* bounds = app.add_subcommand("bounds", "closed-form capacity and cardinality bounds");
  auto* bn = bounds->add_option("--n", o.n, "number of trials")->check(CLI::PositiveNumber);
  auto* bm = bounds->add_option("--n-max", o.n_max, "tabulate n = 1..n-max")->check(CLI::PositiveNumber);
  bn->excludes(bm);
  bounds->add_option("--n-min", o.n_min, "first n of the table")->check(CLI::PositiveNumber);
  add_output_options(bounds, o);

  auto* verify = app.add_subcommand("verify", "check optimality conditions for a given input");
  verify->add_option("--dist", o.dist, "JSON file with points and weights")->required();
  verify->add_option("--n", o.n, "number of trials")->required()->check(positive);
  verify->add_option("--grid", o.grid, "certification grid points")->check(CLI::Range(2, 10000000));
  verify->add_option("--kkt-tol", o.solver.kkt_tol, "slack tolerance (nats)")->capture_default_str();
  add_output_options(verify, o, false);

  auto* sweep = app.add_subcommand("sweep", "solve a range of n and tabulate against the bounds");
  sweep->add_option("--n-max", o.n_max, "last n")->required()->check(positive);
  sweep->add_option("--n-min", o.n_min, "first n")->check(positive);
  add_solver_options(sweep, o);
  add_output_options(sweep, o);

  auto* table = app.add_subcommand("table", "closed-form optima for n <= 3");
  add_output_options(table, o);

  auto* curves = app.add_subcommand("curves", "information density, derivatives and crest-factor bounds");
  curves->add_option("--n", o.n, "number of trials")->required()->check(positive);
  curves->add_option("--dist", o.dist, "use this input instead of solving");
  curves->add_option("--points", o.points, "grid points (default 1001)")->check(CLI::Range(2, 10000000));
  add_solver_options(curves, o);
  add_output_options(curves, o, false);

  auto* entropy = app.add_subcommand("entropy-bounds", "binomial entropy and its bounds");
  entropy->add_option("--n", o.n, "number of trials")->required()->check(CLI::PositiveNumber);
  entropy->add_option("--points", o.points, "grid points (default 201)")->check(CLI::Range(2, 10000000));
  add_output_options(entropy, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  o.solver.symmetrize = !o.no_symmetrize;
  if (*sweep && sweep->get_option("--format")->count() == 0) o.format = "csv";

  try {
    o.solver.validate();
    if (*solve) return cmd_solve(o);
    if (*bounds) {
      if (o.n == 0 && o.n_max == 0) throw std::invalid_argument("bounds needs --n or --n-max");
      if (o.n == 0 && o.n_min > o.n_max) throw std::invalid_argument("--n-min exceeds --n-max");
      return cmd_bounds(o);
    }
    if (*verify) return cmd_verify(o);
    if (*sweep) {
      if (o.n_min > o.n_max) throw std::invalid_argument("--n-min exceeds --n-max");
      return cmd_sweep(o);
    }
    if (*table) return cmd_table(o);
    if (*curves) return cmd_curves(o);
    if (*entropy) return cmd_entropy(o);
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return kExitValidation;
}
