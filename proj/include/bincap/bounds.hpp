#pragma once

#include <iosfwd>
#include <optional>
#include <span>

#include "bincap/solver.hpp"

namespace bincap {

double capacity_lower_bound(int n);
double capacity_upper_bound(int n);

double g_n(double x, int n);
double g_n_uniform_bound(int n);

// -sum_y P(y|x*) log P(x*|y) for an atom x* of the report.
double crest_factor(const SolveReport& report, double x_star);
// -C - log P_X(x*), equal to crest_factor when i(x*) = C.
double crest_factor_from_weight(const SolveReport& report, double x_star);

double crest_factor_lb1(int n, double x);
double crest_factor_lb2(int n, double x);

double support_count_identity(const SolveReport& report);

struct CardinalityBounds {
  double lower = 0.0;
  int upper = 0;
};

CardinalityBounds cardinality_bounds(int n, double capacity_nats);

struct BoundsReport {
  int n = 0;
  double cap_lower = 0.0;
  double cap_upper = 0.0;
  double card_lower = 0.0;
  int card_upper = 0;
  int witsenhausen = 0;
};

// card_lower uses the solved capacity when given, else cap_lower.
BoundsReport make_bounds_report(int n, std::optional<double> capacity_nats = std::nullopt);

}  // namespace bincap
