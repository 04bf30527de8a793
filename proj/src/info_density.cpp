#include "bincap/info_density.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace bincap {

namespace {

constexpr double kWeightFloor = 1e-300;

void check_interior(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error(std::string(what) + " must lie in (0,1)");
}

std::vector<double> pmf(const ChannelSpec& spec, double x) {
  std::vector<double> row(static_cast<std::size_t>(spec.output_size()));
  log_pmf_row(spec, x, row);
  for (auto& v : row) v = std::exp(v);
  return row;
}

double log_moment(const PosteriorTable& t, int y) {
  if (!t.defined(y)) throw UndefinedPosterior(y);
  return t.log_moment(y);
}

}  // namespace

double bregman_binomial(double x, double xhat) {
  check_interior(x, "x");
  check_interior(xhat, "xhat");
  return x * std::log(x * (1.0 - xhat) / ((1.0 - x) * xhat)) - (x - xhat) / (1.0 - xhat);
}

DensityEvaluator::DensityEvaluator(const DiscreteInput& dist, const ChannelSpec& spec)
    : spec_(spec), out_(induce_output(dist, spec)), post_(dist, spec) {
  if (spec.trials() >= 2) {
    spec_reduced_.emplace(spec.trials() - 1);
    post_reduced_.emplace(dist, *spec_reduced_);
  }
}

double DensityEvaluator::value(double x) const { return info_density(x, out_, spec_); }

double DensityEvaluator::prime(double x) const {
  return spec_reduced_ ? prime_reduced(x) : prime_n_trial(x);
}

double DensityEvaluator::prime_reduced(double x) const {
  check_interior(x, "x");
  const int n = spec_.trials();
  const auto p = pmf(*spec_reduced_, x);
  double e = 0.0;
  for (int y = 0; y < n; ++y) {
    const double w = p[static_cast<std::size_t>(y)];
    if (w < kWeightFloor) continue;
    e += w * (post_reduced_->log_mean_complement(y) - post_reduced_->log_mean(y));
  }
  return n * (std::log(x) - std::log1p(-x)) + n * e;
}

double DensityEvaluator::prime_n_trial(double x) const {
  check_interior(x, "x");
  const int n = spec_.trials();
  const auto p = pmf(spec_, x);
  double e = 0.0;
  for (int y = 0; y < n; ++y) {
    const double w = p[static_cast<std::size_t>(y)];
    if (w < kWeightFloor) continue;
    // E[1-X | y+1] / E[X | y] with the shared moment cancelled.
    e += w * (n - y) * (log_moment(post_, y) - log_moment(post_, y + 1));
  }
  return n * (std::log(x) - std::log1p(-x)) + e / (1.0 - x);
}

double DensityEvaluator::g_functional(double x) const {
  check_interior(x, "x");
  const int n = spec_.trials();
  const auto p = pmf(spec_, x);
  double g = 0.0;
  for (int y = 0; y + 2 <= n; ++y) {
    const double w = p[static_cast<std::size_t>(y)];
    if (w < kWeightFloor) continue;
    const double r =
        2.0 * log_moment(post_, y + 1) - log_moment(post_, y) - log_moment(post_, y + 2);
    g += w * (n - y) * (n - y - 1) * r;
  }
  return g;
}

double DensityEvaluator::second(double x) const {
  check_interior(x, "x");
  const double n = spec_.trials();
  return n / (x * (1.0 - x)) + g_functional(x) / ((1.0 - x) * (1.0 - x));
}

double info_density_prime(double x, const DiscreteInput& dist, const ChannelSpec& spec) {
  return DensityEvaluator(dist, spec).prime(x);
}

double info_density_second(double x, const DiscreteInput& dist, const ChannelSpec& spec) {
  return DensityEvaluator(dist, spec).second(x);
}

int count_sign_changes(std::span<const double> values) {
  int changes = 0;
  int last = 0;
  for (double v : values) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int cardinality_upper_via_second_derivative(const DiscreteInput& dist, const ChannelSpec& spec,
                                            int grid_size) {
  if (grid_size < 1000) throw std::invalid_argument("grid_size must be >= 1000");
  const DensityEvaluator ev(dist, spec);
  std::vector<double> d2(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    d2[static_cast<std::size_t>(j)] = ev.second(static_cast<double>(j + 1) / (grid_size + 1));
  }
  return 2 + count_sign_changes(d2) / 2;
}

DensityCurve make_density_curve(const DiscreteInput& dist, const ChannelSpec& spec,
                                std::span<const double> grid) {
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0 && grid[j] <= 1.0) || (j > 0 && !(grid[j] > grid[j - 1]))) {
      throw std::invalid_argument("curve grid must be strictly increasing in [0,1]");
    }
  }
  const DensityEvaluator ev(dist, spec);
  DensityCurve c;
  c.grid.assign(grid.begin(), grid.end());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double x : grid) {
    c.values.push_back(ev.value(x));
    const bool interior = x > 0.0 && x < 1.0;
    c.d1.push_back(interior ? ev.prime(x) : nan);
    c.d2.push_back(interior ? ev.second(x) : nan);
  }
  return c;
}

void write_csv(std::ostream& os, const DensityCurve& curve) {
  auto cell = [](double v) { return std::isnan(v) ? std::string() : fmt::format("{:.17g}", v); };
  os << "x,i,i_prime,i_second\n";
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    fmt::print(os, "{:.17g},{},{},{}\n", curve.grid[j], cell(curve.values[j]), cell(curve.d1[j]),
               cell(curve.d2[j]));
  }
}

}  // namespace bincap
