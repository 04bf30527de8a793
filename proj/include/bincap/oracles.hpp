#pragma once

#include <cstdint>
#include <vector>

#include "bincap/distributions.hpp"

namespace bincap {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct ExactSolution {
  int n = 0;
  Rational capacity_exp;  // capacity = log(capacity_exp)
  std::vector<Rational> points;
  std::vector<Rational> weights;
  std::vector<Rational> output;

  double capacity_nats() const;
  DiscreteInput input() const;
  OutputPmf output_pmf() const;
};

// Known closed-form optimum for n in {1, 2, 3}.
ExactSolution exact_solution(int n);

// Plain weight iteration on a uniform grid, run to a duality gap <= tol.
// Returns the lower end of the final sandwich.
double brute_force_grid_capacity(const ChannelSpec& spec, int grid_points, double tol);

}  // namespace bincap
