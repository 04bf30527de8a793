#include "bincap/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bincap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinGap = 1e-12;

// Neumaier compensated accumulator.
class Sum {
 public:
  void add(double v) {
    const double t = s_ + v;
    c_ += std::abs(s_) >= std::abs(v) ? (s_ - t) + v : (v - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double a : v) m = std::max(m, a);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

}  // namespace

DiscreteInput::DiscreteInput(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw std::invalid_argument("input distribution: no atoms");
  if (points_.size() != weights_.size()) {
    throw std::invalid_argument("input distribution: points and weights differ in length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!(points_[k] >= 0.0 && points_[k] <= 1.0)) {
      throw std::invalid_argument("input distribution: points must lie in [0,1]");
    }
    if (k > 0 && !(points_[k] - points_[k - 1] >= kMinGap)) {
      throw std::invalid_argument(
          "input distribution: points must be strictly increasing with gaps >= 1e-12");
    }
    if (!(weights_[k] > 0.0)) throw std::invalid_argument("input distribution: weights must be > 0");
    total += weights_[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("input distribution: weights must sum to 1 within 1e-12");
  }
}

int DiscreteInput::find(double x, double tol) const {
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (std::abs(points_[k] - x) <= tol) return static_cast<int>(k);
  }
  return -1;
}

OutputPmf induce_output(const DiscreteInput& dist, const ChannelSpec& spec) {
  const auto m = static_cast<std::size_t>(spec.output_size());
  std::vector<Sum> acc(m);
  std::vector<double> row(m);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    log_pmf_row(spec, dist.points()[k], row);
    for (std::size_t y = 0; y < m; ++y) acc[y].add(dist.weights()[k] * std::exp(row[y]));
  }
  std::vector<double> q(m);
  for (std::size_t y = 0; y < m; ++y) q[y] = acc[y].value();
  return OutputPmf(spec.trials(), std::move(q));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::domain_error("kl_divergence: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

double info_density(double x, const OutputPmf& out, const ChannelSpec& spec) {
  if (out.size() != static_cast<std::size_t>(spec.output_size())) {
    throw std::domain_error("info_density: output pmf length must be n+1");
  }
  std::vector<double> row(out.size());
  log_pmf_row(spec, x, row);
  double d = 0.0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    if (row[y] == kNegInf) continue;
    if (out[y] == 0.0) return std::numeric_limits<double>::infinity();
    d += std::exp(row[y]) * (row[y] - std::log(out[y]));
  }
  return d;
}

double mutual_information(const DiscreteInput& dist, const ChannelSpec& spec) {
  const OutputPmf out = induce_output(dist, spec);
  double s = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    s += dist.weights()[k] * info_density(dist.points()[k], out, spec);
  }
  return s;
}

PosteriorTable::PosteriorTable(const DiscreteInput& dist, const ChannelSpec& spec)
    : n_(spec.trials()) {
  const std::size_t m = static_cast<std::size_t>(n_) + 1;
  const std::size_t K = dist.size();
  log_base_.assign(m, kNegInf);
  log_x_.assign(m, kNegInf);
  log_1mx_.assign(m, kNegInf);
  std::vector<double> t0(K), t1(K), t2(K);
  for (int y = 0; y <= n_; ++y) {
    for (std::size_t k = 0; k < K; ++k) {
      const double x = dist.points()[k];
      const double lw = std::log(dist.weights()[k]);
      // 0^0 = 1 throughout
      const double a = y == 0 ? 0.0 : y * safe_log(x);
      const double b = y == n_ ? 0.0 : (n_ - y) * safe_log(1.0 - x);
      t0[k] = lw + a + b;
      t1[k] = t0[k] + safe_log(x);
      t2[k] = t0[k] + safe_log(1.0 - x);
    }
    const auto uy = static_cast<std::size_t>(y);
    log_base_[uy] = log_sum_exp(t0);
    log_x_[uy] = log_sum_exp(t1);
    log_1mx_[uy] = log_sum_exp(t2);
  }
}

bool PosteriorTable::defined(int y) const {
  return y >= 0 && y <= n_ && log_base_[static_cast<std::size_t>(y)] > kNegInf;
}

void PosteriorTable::require(int y) const {
  if (y < 0 || y > n_) throw std::domain_error("posterior: outcome y out of range");
  if (!defined(y)) throw UndefinedPosterior(y);
}

double PosteriorTable::log_mean(int y) const {
  require(y);
  const auto uy = static_cast<std::size_t>(y);
  return log_x_[uy] - log_base_[uy];
}

double PosteriorTable::log_mean_complement(int y) const {
  require(y);
  const auto uy = static_cast<std::size_t>(y);
  return log_1mx_[uy] - log_base_[uy];
}

double PosteriorTable::log_moment(int y) const {
  if (y < 0 || y > n_) throw std::domain_error("posterior: outcome y out of range");
  return log_base_[static_cast<std::size_t>(y)];
}

double PosteriorTable::mean(int y) const { return std::exp(log_mean(y)); }
double PosteriorTable::mean_complement(int y) const { return std::exp(log_mean_complement(y)); }

double posterior_mean(const DiscreteInput& dist, const ChannelSpec& spec, int y) {
  return PosteriorTable(dist, spec).mean(y);
}

LogDet channel_matrix_logdet(const ChannelSpec& spec, std::span<const double> support) {
  const int m = spec.output_size();
  if (support.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("channel matrix: support must have exactly n+1 points");
  }
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (!(support[k] >= 0.0 && support[k] <= 1.0)) {
      throw std::invalid_argument("channel matrix: points must lie in [0,1]");
    }
    if (k > 0 && !(support[k] > support[k - 1])) {
      throw std::invalid_argument("channel matrix: points must be strictly increasing");
    }
  }
  // a(i,k) = P(i | x_k), row-major
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  std::vector<double> row(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    log_pmf_row(spec, support[static_cast<std::size_t>(k)], row);
    for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i * m + k)] = std::exp(row[static_cast<std::size_t>(i)]);
  }
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * m + j)]; };
  LogDet out{1, 0.0};
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r) {
      if (std::abs(at(r, c)) > std::abs(at(piv, c))) piv = r;
    }
    if (at(piv, c) == 0.0) return LogDet{0, kNegInf};
    if (piv != c) {
      for (int j = 0; j < m; ++j) std::swap(at(piv, j), at(c, j));
      out.sign = -out.sign;
    }
    const double d = at(c, c);
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs_det += std::log(std::abs(d));
    for (int r = c + 1; r < m; ++r) {
      const double f = at(r, c) / d;
      if (f == 0.0) continue;
      for (int j = c; j < m; ++j) at(r, j) -= f * at(c, j);
    }
  }
  return out;
}

}  // namespace bincap
