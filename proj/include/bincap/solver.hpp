#pragma once

#include <span>
#include <vector>

#include "bincap/distributions.hpp"

namespace bincap {

struct SolverConfig {
  int grid_size = 2049;
  double ba_tol = 1e-10;
  double kkt_tol = 1e-8;
  double merge_radius = 1e-4;
  double prune_weight = 1e-12;
  int max_outer_iters = 200;
  bool symmetrize = true;

  // Throws std::invalid_argument naming the violated field.
  void validate() const;
};

struct BaResult {
  std::vector<double> weights;
  double capacity_low = 0.0;
  double capacity_high = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Plain alternating maximization over weights on a fixed support. An empty
// `initial` starts from uniform weights.
BaResult blahut_arimoto(const ChannelSpec& spec, std::span<const double> grid, double tol,
                        std::span<const double> initial = {}, int max_iters = 100000);

DiscreteInput refine_support(const ChannelSpec& spec, const DiscreteInput& coarse,
                             const SolverConfig& config);

struct SolveReport {
  int n = 0;
  DiscreteInput input;
  OutputPmf output;
  double capacity_nats = 0.0;
  double kkt_slack = 0.0;
  double equality_defect = 0.0;
  int support_size = 0;
  std::vector<double> active_set_estimate;
  int iterations = 0;
  bool converged = false;
};

SolveReport solve_capacity(const ChannelSpec& spec, const SolverConfig& config = {});

// Report for an arbitrary input, certified on a uniform grid of grid_size points.
SolveReport evaluate_input(const ChannelSpec& spec, const DiscreteInput& input, int grid_size,
                           double kkt_tol = 1e-8);

struct KktSummary {
  double slack = 0.0;
  double equality_defect = 0.0;
  std::vector<double> active_set;
  int grid_points = 0;

  bool kkt_inequality = false;
  bool kkt_equality = false;
  bool endpoints_in_support = false;
  double capacity_identity_defect = 0.0;
  bool capacity_identity = false;
  bool edge_intervals = false;
  double symmetry_defect = 0.0;
  bool symmetric = false;
  bool active_set_bound = false;

  bool all_pass() const {
    return kkt_inequality && kkt_equality && endpoints_in_support && capacity_identity &&
           edge_intervals && symmetric && active_set_bound;
  }
};

// Grid is grid_size uniform points plus every atom.
KktSummary kkt_verify(const SolveReport& report, const ChannelSpec& spec, int grid_size,
                      double tol = 1e-8);

}  // namespace bincap
