#include "bincap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bincap {

namespace {

constexpr double kPi = std::numbers::pi;

void check_trials(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

int atom_index(const SolveReport& report, double x_star) {
  const int k = report.input.find(x_star);
  if (k < 0) throw std::domain_error("x_star is not an atom of the input distribution");
  return k;
}

}  // namespace

double capacity_lower_bound(int n) {
  check_trials(n);
  const double m = n;
  const double second = std::log(kPi * m) -
                        0.5 * std::log(2.0 * kPi * std::numbers::e * (m / 8.0 + 1.0 / 12.0)) +
                        std::log(1.0 / (16.0 * m * m)) / std::sqrt(kPi * (m + 0.25)) -
                        std::log(4.0) - 1.0;
  return std::max(std::log(2.0), second);
}

double capacity_upper_bound(int n) {
  check_trials(n);
  const double m = n;
  const double card = std::log(3.0 + static_cast<double>((n - 1) / 2));
  const double dual = std::log(kPi * (m + 1.0)) - 0.5 * std::log(m) + 1.5 +
                      std::pow(2.0, -(m + 1.0)) * std::log(m) +
                      0.5 * std::log(1.5 * (1.0 + 1.0 / m));
  return std::min(card, dual);
}

double g_n(double x, int n) {
  check_trials(n);
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("x must lie in [0,1]");
  const double a = std::pow(1.0 - x, n);
  const double b = std::pow(x, n);
  const double t = (n * x + 0.5) / (n + 1.0);
  return 0.5 * (a + b) * std::log(2.0 * kPi * n) - 0.5 * xlogy(1.0 - a, x) -
         0.5 * xlogy(1.0 - b, 1.0 - x) + 0.5 * std::log(t * (1.0 - t));
}

double g_n_uniform_bound(int n) {
  check_trials(n);
  const double m = n;
  return 0.5 * std::log(2.0 * kPi) + 0.5 + std::pow(2.0, -(m + 1.0)) * std::log(m) +
         0.5 * std::log(1.5 * (1.0 + 1.0 / m));
}

double crest_factor(const SolveReport& report, double x_star) {
  const int k = atom_index(report, x_star);
  const ChannelSpec spec(report.n);
  const double x = report.input.points()[static_cast<std::size_t>(k)];
  const double lw = std::log(report.input.weights()[static_cast<std::size_t>(k)]);
  std::vector<double> row(static_cast<std::size_t>(spec.output_size()));
  log_pmf_row(spec, x, row);
  double d = 0.0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    const double p = std::exp(row[y]);
    if (p == 0.0) continue;
    // log P(x*|y) = log w + log P(y|x*) - log P_Y(y)
    d -= p * (lw + row[y] - std::log(report.output[y]));
  }
  return d;
}

double crest_factor_from_weight(const SolveReport& report, double x_star) {
  const int k = atom_index(report, x_star);
  return -report.capacity_nats - std::log(report.input.weights()[static_cast<std::size_t>(k)]);
}

double crest_factor_lb1(int n, double x) {
  check_trials(n);
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("crest_factor_lb1: x must lie in (0,1)");
  const double a = std::pow(1.0 - x, n);
  const double b = std::pow(x, n);
  return (xlogy(a, a) + xlogy(b, b)) / (a + b - 1.0);
}

double crest_factor_lb2(int n, double x) {
  check_trials(n);
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("crest_factor_lb2: x must lie in (0,1)");
  if (x == 0.5) throw std::domain_error("crest_factor_lb2: x = 1/2 is excluded");
  const double e = n * (1.0 - 2.0 * x) * (std::log(x) - std::log1p(-x));
  return e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
}

double support_count_identity(const SolveReport& report) {
  double mean = 0.0;
  for (double x : report.input.points()) mean += std::exp(-crest_factor(report, x));
  mean /= static_cast<double>(report.input.size());
  return std::exp(report.capacity_nats) / mean;
}

CardinalityBounds cardinality_bounds(int n, double capacity_nats) {
  check_trials(n);
  if (!(capacity_nats >= 0.0)) throw std::invalid_argument("capacity must be >= 0");
  return {std::exp(capacity_nats), 2 + n / 2};
}

BoundsReport make_bounds_report(int n, std::optional<double> capacity_nats) {
  BoundsReport r;
  r.n = n;
  r.cap_lower = capacity_lower_bound(n);
  r.cap_upper = capacity_upper_bound(n);
  const auto card = cardinality_bounds(n, capacity_nats.value_or(r.cap_lower));
  r.card_lower = card.lower;
  r.card_upper = card.upper;
  r.witsenhausen = n + 1;
  return r;
}

}  // namespace bincap
