#include "bincap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bincap {

namespace {

constexpr int kBruteForceCap = 2'000'000;
constexpr double kWeightFloor = 1e-300;

std::vector<double> values(const std::vector<Rational>& r) {
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& v : r) out.push_back(v.value());
  return out;
}

}  // namespace

double ExactSolution::capacity_nats() const {
  return std::log(static_cast<double>(capacity_exp.num)) - std::log(static_cast<double>(capacity_exp.den));
}

DiscreteInput ExactSolution::input() const { return DiscreteInput(values(points), values(weights)); }

OutputPmf ExactSolution::output_pmf() const { return OutputPmf(n, values(output)); }

ExactSolution exact_solution(int n) {
  switch (n) {
    case 1:
      return {1, {2, 1}, {{0, 1}, {1, 1}}, {{1, 2}, {1, 2}}, {{1, 2}, {1, 2}}};
    case 2:
      return {2, {17, 8}, {{0, 1}, {1, 2}, {1, 1}}, {{15, 34}, {2, 17}, {15, 34}},
              {{8, 17}, {1, 17}, {8, 17}}};
    case 3:
      return {3, {19, 8}, {{0, 1}, {1, 2}, {1, 1}}, {{15, 38}, {4, 19}, {15, 38}},
              {{8, 19}, {3, 38}, {3, 38}, {8, 19}}};
    default:
      throw std::domain_error("exact solutions exist only for n in {1,2,3}");
  }
}

double brute_force_grid_capacity(const ChannelSpec& spec, int grid_points, double tol) {
  if (grid_points < 101 || grid_points % 2 == 0) {
    throw std::invalid_argument("brute force grid needs an odd number of points >= 101");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const auto K = static_cast<std::size_t>(grid_points);
  const auto Y = static_cast<std::size_t>(spec.output_size());
  // D(x_k) = sum_y P log P - sum_y P log q; the first term is fixed per row.
  std::vector<double> P(K * Y), h(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(K - 1);
    for (std::size_t y = 0; y < Y; ++y) {
      const double l = log_pmf(spec, static_cast<int>(y), x);
      P[k * Y + y] = std::exp(l);
      if (P[k * Y + y] > 0.0) h[k] += P[k * Y + y] * l;
    }
  }
  std::vector<double> w(K, 1.0 / static_cast<double>(K)), q(Y), lq(Y), d(K);
  for (int it = 0; it < kBruteForceCap; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double* row = &P[k * Y];
      for (std::size_t y = 0; y < Y; ++y) q[y] += w[k] * row[y];
    }
    for (std::size_t y = 0; y < Y; ++y) lq[y] = std::log(q[y]);
    double low = 0.0, high = -INFINITY;
    for (std::size_t k = 0; k < K; ++k) {
      const double* row = &P[k * Y];
      double s = 0.0;
      for (std::size_t y = 0; y < Y; ++y) s += row[y] * lq[y];
      d[k] = h[k] - s;
      low += w[k] * d[k];
      high = std::max(high, d[k]);
    }
    if (high - low <= tol) return low;
    double z = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (w[k] == 0.0) continue;
      w[k] *= std::exp(d[k] - high);
      z += w[k];
    }
    // Flushing subnormal weights keeps the loop off the slow arithmetic path.
    for (auto& v : w) {
      v /= z;
      if (v < kWeightFloor) v = 0.0;
    }
  }
  throw std::runtime_error("brute force grid capacity did not reach the requested gap");
}

}  // namespace bincap
