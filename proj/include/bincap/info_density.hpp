#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bincap/distributions.hpp"

namespace bincap {

double bregman_binomial(double x, double xhat);

// Information density of the output induced by dist, and its derivatives in x.
class DensityEvaluator {
 public:
  DensityEvaluator(const DiscreteInput& dist, const ChannelSpec& spec);

  const OutputPmf& output() const noexcept { return out_; }

  double value(double x) const;
  double prime(double x) const;
  // Same derivative written with n-trial posteriors; the only form for n = 1.
  double prime_n_trial(double x) const;
  double second(double x) const;
  double g_functional(double x) const;

 private:
  double prime_reduced(double x) const;

  ChannelSpec spec_;
  OutputPmf out_;
  PosteriorTable post_;
  std::optional<ChannelSpec> spec_reduced_;
  std::optional<PosteriorTable> post_reduced_;
};

double info_density_prime(double x, const DiscreteInput& dist, const ChannelSpec& spec);
double info_density_second(double x, const DiscreteInput& dist, const ChannelSpec& spec);

int count_sign_changes(std::span<const double> values);

int cardinality_upper_via_second_derivative(const DiscreteInput& dist, const ChannelSpec& spec,
                                            int grid_size);

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> d1;  // NaN at the endpoints
  std::vector<double> d2;
};

DensityCurve make_density_curve(const DiscreteInput& dist, const ChannelSpec& spec,
                                std::span<const double> grid);

void write_csv(std::ostream& os, const DensityCurve& curve);

}  // namespace bincap
