#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bincap/binomial_kernel.hpp"

namespace bincap {

// Finite input law on [0,1]; immutable once built.
class DiscreteInput {
 public:
  DiscreteInput(std::vector<double> points, std::vector<double> weights);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  // Index of the atom at x (within tol), or -1.
  int find(double x, double tol = 1e-12) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

class UndefinedPosterior : public std::domain_error {
 public:
  explicit UndefinedPosterior(int y)
      : std::domain_error("posterior undefined: output y=" + std::to_string(y) + " has zero mass"),
        y_(y) {}
  int outcome() const noexcept { return y_; }

 private:
  int y_;
};

OutputPmf induce_output(const DiscreteInput& dist, const ChannelSpec& spec);

double kl_divergence(std::span<const double> p, std::span<const double> q);

double info_density(double x, const OutputPmf& out, const ChannelSpec& spec);

double mutual_information(const DiscreteInput& dist, const ChannelSpec& spec);

// Log-domain moment sums E[X^y (1-X)^(n-y)], with one extra factor of X or 1-X.
class PosteriorTable {
 public:
  PosteriorTable(const DiscreteInput& dist, const ChannelSpec& spec);

  int trials() const noexcept { return n_; }
  bool defined(int y) const;
  // E[X | Y=y] and E[1-X | Y=y]
  double mean(int y) const;
  double mean_complement(int y) const;
  double log_mean(int y) const;
  double log_mean_complement(int y) const;
  // log E[X^y (1-X)^(n-y)]; -inf when output y has zero mass.
  double log_moment(int y) const;

 private:
  void require(int y) const;

  int n_;
  std::vector<double> log_base_;  // log E[X^y (1-X)^(n-y)]
  std::vector<double> log_x_;     // log E[X^(y+1) (1-X)^(n-y)]
  std::vector<double> log_1mx_;   // log E[X^y (1-X)^(n-y+1)]
};

double posterior_mean(const DiscreteInput& dist, const ChannelSpec& spec, int y);

struct LogDet {
  int sign = 0;
  double log_abs_det = 0.0;
};

LogDet channel_matrix_logdet(const ChannelSpec& spec, std::span<const double> support);

}  // namespace bincap
