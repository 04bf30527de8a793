#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bincap/bounds.hpp"
#include "bincap/info_density.hpp"
#include "bincap/oracles.hpp"
#include "bincap/solver.hpp"

namespace bincap {

// Reals use 17 significant digits; non-finite values are written as the
// strings "inf", "-inf" and "nan".
std::string json_number(double v);

void write_json(std::ostream& os, const SolveReport& report, const KktSummary& flags);
void write_json(std::ostream& os, const KktSummary& summary, int n, double capacity_nats);
void write_json(std::ostream& os, const BoundsReport& bounds);
void write_json(std::ostream& os, const std::vector<BoundsReport>& rows);
void write_json(std::ostream& os, const std::vector<ExactSolution>& fixtures);

struct SweepRow {
  BoundsReport bounds;
  double capacity_nats = 0.0;
  int support_size = 0;
  double kkt_slack = 0.0;
  bool converged = false;
};

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_bounds_csv(std::ostream& os, const std::vector<BoundsReport>& rows);
// x, lb1, lb2 on the interior grid; lb2 is blank at x = 1/2.
void write_crest_curves_csv(std::ostream& os, int n, const std::vector<double>& grid);
void write_entropy_csv(std::ostream& os, const ChannelSpec& spec, const std::vector<double>& grid);

// Accepts {"points": [...], "weights": [...]} or a solve report with
// "support" in place of "points". Throws std::invalid_argument on bad input.
DiscreteInput read_input_json(std::istream& is);

}  // namespace bincap
