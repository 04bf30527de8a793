#include "bincap/binomial_kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bincap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1]");
  }
}

// Extended precision keeps log C(n,y) accurate to the last bit of a double
// even when the lgamma terms are several thousand nats.
std::vector<double> make_log_choose(int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  const long double top = std::lgamma(static_cast<long double>(n) + 1.0L);
  for (int y = 0; y <= n; ++y) {
    const long double v = top - std::lgamma(static_cast<long double>(y) + 1.0L) -
                          std::lgamma(static_cast<long double>(n - y) + 1.0L);
    out[static_cast<std::size_t>(y)] = static_cast<double>(v);
  }
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

}  // namespace

ChannelSpec::ChannelSpec(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("trial count n must be >= 1");
  log_choose_ = std::make_shared<const std::vector<double>>(make_log_choose(n));
}

OutputPmf::OutputPmf(int n, std::vector<double> probs) : n_(n), probs_(std::move(probs)) {
  if (n < 1) throw std::invalid_argument("output pmf: n must be >= 1");
  if (probs_.size() != static_cast<std::size_t>(n) + 1) {
    throw std::invalid_argument("output pmf: length must be n+1");
  }
  double s = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("output pmf: entries must be nonnegative");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("output pmf: entries must sum to 1");
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double log_pmf(const ChannelSpec& spec, int y, double x) {
  const int n = spec.trials();
  if (y < 0 || y > n) throw std::domain_error("outcome y must lie in [0,n]");
  check_unit(x, "x");
  if (x == 0.0) return y == 0 ? 0.0 : kNegInf;
  if (x == 1.0) return y == n ? 0.0 : kNegInf;
  return spec.log_choose(y) + y * std::log(x) + (n - y) * std::log1p(-x);
}

void log_pmf_row(const ChannelSpec& spec, double x, std::span<double> out) {
  const int n = spec.trials();
  check_unit(x, "x");
  if (out.size() != static_cast<std::size_t>(n) + 1) {
    throw std::invalid_argument("log_pmf_row: output span must have n+1 entries");
  }
  if (x == 0.0 || x == 1.0) {
    for (auto& v : out) v = kNegInf;
    out[x == 0.0 ? 0 : static_cast<std::size_t>(n)] = 0.0;
    return;
  }
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  for (int y = 0; y <= n; ++y) {
    out[static_cast<std::size_t>(y)] = spec.log_choose(y) + y * lx + (n - y) * l1x;
  }
}

OutputPmf pmf_row(const ChannelSpec& spec, double x) {
  std::vector<double> row(static_cast<std::size_t>(spec.output_size()));
  log_pmf_row(spec, x, row);
  for (auto& v : row) v = std::exp(v);
  return OutputPmf(spec.trials(), std::move(row));
}

double binary_entropy(double x) {
  check_unit(x, "x");
  return -xlogy(x, x) - xlogy(1.0 - x, 1.0 - x);
}

double binomial_entropy_exact(const ChannelSpec& spec, double x) {
  std::vector<double> row(static_cast<std::size_t>(spec.output_size()));
  log_pmf_row(spec, x, row);
  double h = 0.0;
  for (double l : row) {
    if (l == kNegInf) continue;
    h -= std::exp(l) * l;
  }
  return h;
}

double binomial_entropy_upper(const ChannelSpec& spec, double x) {
  check_unit(x, "x");
  const double n = spec.trials();
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * (n * x * (1.0 - x) + 1.0 / 12.0));
}

double binomial_entropy_lower(const ChannelSpec& spec, double x) {
  check_unit(x, "x");
  const int n = spec.trials();
  const double a = std::pow(1.0 - x, n);
  const double b = std::pow(x, n);
  return (1.0 - a - b) * 0.5 * std::log(2.0 * std::numbers::pi * n) + 0.5 * xlogy(1.0 - a, x) +
         0.5 * xlogy(1.0 - b, 1.0 - x) - 1.0;
}

}  // namespace bincap
