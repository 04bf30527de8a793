#include "bincap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bincap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;
constexpr double kBaWeightFloor = 1e-300;
constexpr int kSeedIters = 1000;
constexpr int kSupportBaIters = 500;
constexpr double kSupportBaTol = 1e-6;
constexpr int kNewtonIters = 100;
constexpr double kNewtonGradTol = 1e-13;
constexpr double kNewtonDropWeight = 1e-10;
constexpr double kEscapeWeight = 1e-3;
constexpr int kMaxEscapes = 3;

// Dense likelihood rows for a fixed set of points. Entries that underflow are
// exactly zero, and [lo, hi] brackets the nonzero ones.
class RowSet {
 public:
  RowSet(const ChannelSpec& spec, std::span<const double> points)
      : m_(points.size()), width_(static_cast<std::size_t>(spec.output_size())) {
    p_.resize(m_ * width_);
    l_.resize(m_ * width_);
    lo_.resize(m_);
    hi_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      std::span<double> l(l_.data() + k * width_, width_);
      log_pmf_row(spec, points[k], l);
      std::size_t lo = width_, hi = 0;
      for (std::size_t y = 0; y < width_; ++y) {
        const double v = std::exp(l[y]);
        p_[k * width_ + y] = v;
        if (v > 0.0) {
          lo = std::min(lo, y);
          hi = y;
        }
      }
      lo_[k] = lo;
      hi_[k] = hi;
    }
  }

  std::size_t size() const { return m_; }

  std::vector<double> mix(std::span<const double> w) const {
    std::vector<double> q(width_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double* p = p_.data() + k * width_;
      for (std::size_t y = lo_[k]; y <= hi_[k]; ++y) q[y] += w[k] * p[y];
    }
    return q;
  }

  // D(P(.|x_k) || q) for every row.
  std::vector<double> divergences(std::span<const double> q) const {
    std::vector<double> lq(width_);
    for (std::size_t y = 0; y < width_; ++y) lq[y] = q[y] > 0.0 ? std::log(q[y]) : kNegInf;
    std::vector<double> d(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const double* p = p_.data() + k * width_;
      const double* l = l_.data() + k * width_;
      double s = 0.0;
      for (std::size_t y = lo_[k]; y <= hi_[k]; ++y) {
        if (p[y] == 0.0) continue;
        if (q[y] == 0.0) {
          s = kInf;
          break;
        }
        s += p[y] * (l[y] - lq[y]);
      }
      d[k] = s;
    }
    return d;
  }

 private:
  std::size_t m_;
  std::size_t width_;
  std::vector<double> p_;
  std::vector<double> l_;
  std::vector<std::size_t> lo_;
  std::vector<std::size_t> hi_;
};

struct Atoms {
  std::vector<double> x;
  std::vector<double> w;
};

void normalize(std::vector<double>& w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
}

double mutual_info_of(const ChannelSpec& spec, const Atoms& a) {
  const RowSet rows(spec, a.x);
  const auto d = rows.divergences(rows.mix(a.w));
  double s = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) s += a.w[k] * d[k];
  return s;
}

bool is_endpoint(double x) { return x == 0.0 || x == 1.0; }

// Consecutive atoms closer than radius collapse to their weighted centroid;
// a cluster holding an endpoint stays at that endpoint.
Atoms merge_close(const Atoms& in, double radius) {
  Atoms out;
  std::size_t k = 0;
  while (k < in.x.size()) {
    double sw = in.w[k], sx = in.w[k] * in.x[k];
    double pin = is_endpoint(in.x[k]) ? in.x[k] : -1.0;
    std::size_t j = k + 1;
    while (j < in.x.size() && in.x[j] - in.x[j - 1] <= radius) {
      sw += in.w[j];
      sx += in.w[j] * in.x[j];
      if (is_endpoint(in.x[j])) pin = in.x[j];
      ++j;
    }
    out.x.push_back(pin >= 0.0 ? pin : sx / sw);
    out.w.push_back(sw);
    k = j;
  }
  return out;
}

// Average with the mirror image x -> 1-x and rebuild an exactly symmetric law.
Atoms symmetrize(const Atoms& in, double radius) {
  std::vector<std::pair<double, double>> pool;
  for (std::size_t k = 0; k < in.x.size(); ++k) {
    pool.emplace_back(in.x[k], 0.5 * in.w[k]);
    pool.emplace_back(1.0 - in.x[k], 0.5 * in.w[k]);
  }
  std::sort(pool.begin(), pool.end());
  Atoms both;
  for (const auto& [x, w] : pool) {
    both.x.push_back(x);
    both.w.push_back(w);
  }
  const Atoms merged = merge_close(both, radius);
  Atoms left;
  double mid = 0.0;
  bool has_mid = false;
  for (std::size_t k = 0; k < merged.x.size(); ++k) {
    if (std::abs(merged.x[k] - 0.5) <= 0.5 * radius) {
      has_mid = true;
      mid += merged.w[k];
    } else if (merged.x[k] < 0.5) {
      left.x.push_back(merged.x[k]);
      left.w.push_back(merged.w[k]);
    }
  }
  Atoms out = left;
  if (has_mid) {
    out.x.push_back(0.5);
    out.w.push_back(mid);
  }
  for (std::size_t k = left.x.size(); k-- > 0;) {
    out.x.push_back(1.0 - left.x[k]);
    out.w.push_back(left.w[k]);
  }
  if (has_mid) {
    const double side = std::accumulate(left.w.begin(), left.w.end(), 0.0);
    out.w[left.x.size()] = 1.0 - 2.0 * side;
    if (!(out.w[left.x.size()] > 0.0)) {
      out.w[left.x.size()] = mid;
      normalize(out.w);
    }
  } else {
    normalize(out.w);
  }
  return out;
}

// Pairs atom k with atom m-1-k; assumes the layout is already mirror-matched.
void mirror_fix(Atoms& a) {
  const std::size_t m = a.x.size();
  for (std::size_t k = 0; k < m / 2; ++k) {
    const std::size_t j = m - 1 - k;
    const double x = 0.5 * (a.x[k] + 1.0 - a.x[j]);
    const double w = 0.5 * (a.w[k] + a.w[j]);
    a.x[k] = x;
    a.x[j] = 1.0 - x;
    a.w[k] = w;
    a.w[j] = w;
  }
  if (m % 2 == 1) a.x[m / 2] = 0.5;
  normalize(a.w);
}

Atoms prune(const Atoms& in, double threshold) {
  Atoms out;
  for (std::size_t k = 0; k < in.x.size(); ++k) {
    if (in.w[k] > threshold || is_endpoint(in.x[k])) {
      out.x.push_back(in.x[k]);
      out.w.push_back(in.w[k]);
    }
  }
  normalize(out.w);
  return out;
}

// Damped Newton ascent on I(w, x) over weights and interior positions jointly,
// restricted to sum(w) = 1. Stationary points have i(x_k) equal on the support
// and i'(x_k) = 0 at every interior atom.
Atoms newton_polish(const ChannelSpec& spec, Atoms a, double merge_radius, bool symmetric) {
  const int n = spec.trials();
  const std::size_t width = static_cast<std::size_t>(spec.output_size());
  for (int it = 0; it < kNewtonIters; ++it) {
    a = merge_close(a, merge_radius);
    if (symmetric) mirror_fix(a);
    const std::size_t m = a.x.size();
    if (m < 2) break;
    std::vector<std::size_t> inter;
    for (std::size_t k = 0; k < m; ++k) {
      if (!is_endpoint(a.x[k])) inter.push_back(k);
    }
    const std::size_t r = inter.size();

    Eigen::MatrixXd P(m, width), dP(m, width), F(m, width);
    std::vector<double> row(width);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width));
    for (std::size_t k = 0; k < m; ++k) {
      const double x = a.x[k];
      log_pmf_row(spec, x, row);
      for (std::size_t y = 0; y < width; ++y) {
        P(k, y) = std::exp(row[y]);
        F(k, y) = row[y];
        const double s = is_endpoint(x) ? 0.0 : (static_cast<double>(y) - n * x) / (x * (1.0 - x));
        dP(k, y) = s * P(k, y);
      }
      q += a.w[k] * P.row(k).transpose();
    }
    Eigen::VectorXd lq(width);
    for (std::size_t y = 0; y < width; ++y) lq(y) = q(y) > 0.0 ? std::log(q(y)) : kNegInf;

    Eigen::VectorXd ik(m), d1(m), d2(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double x = a.x[k];
      double v = 0.0, v1 = 0.0, v2 = 0.0;
      for (std::size_t y = 0; y < width; ++y) {
        if (P(k, y) == 0.0) {
          F(k, y) = 0.0;
          continue;
        }
        const double f = F(k, y) - lq(y);
        F(k, y) = f;
        v += P(k, y) * f;
        if (is_endpoint(x)) continue;
        const double yy = static_cast<double>(y);
        const double s = (yy - n * x) / (x * (1.0 - x));
        const double ds = -yy / (x * x) - (n - yy) / ((1.0 - x) * (1.0 - x));
        v1 += dP(k, y) * f;
        v2 += (s * s + ds) * P(k, y) * f + s * s * P(k, y);
      }
      ik(k) = v;
      d1(k) = v1;
      d2(k) = v2;
    }
    double I = 0.0;
    for (std::size_t k = 0; k < m; ++k) I += a.w[k] * ik(k);

    const auto N = static_cast<Eigen::Index>(m + r);
    Eigen::VectorXd g(N);
    for (std::size_t k = 0; k < m; ++k) g(k) = ik(k) - 1.0;
    for (std::size_t j = 0; j < r; ++j) g(m + j) = a.w[inter[j]] * d1(inter[j]);

    Eigen::VectorXd qinv(width);
    for (std::size_t y = 0; y < width; ++y) qinv(y) = q(y) > 0.0 ? 1.0 / q(y) : 0.0;
    const Eigen::MatrixXd Pq = P * qinv.asDiagonal();
    Eigen::MatrixXd dPi(r, width);
    Eigen::VectorXd wi(r);
    for (std::size_t j = 0; j < r; ++j) {
      dPi.row(j) = dP.row(inter[j]);
      wi(j) = a.w[inter[j]];
    }
    Eigen::MatrixXd H(N, N);
    H.topLeftCorner(m, m) = -Pq * P.transpose();
    Eigen::MatrixXd Hwx = -(Pq * dPi.transpose()) * wi.asDiagonal();
    for (std::size_t j = 0; j < r; ++j) Hwx(inter[j], j) += d1(inter[j]);
    H.topRightCorner(m, r) = Hwx;
    H.bottomLeftCorner(r, m) = Hwx.transpose();
    Eigen::MatrixXd Hxx = -(wi.asDiagonal() * (dPi * qinv.asDiagonal() * dPi.transpose()) * wi.asDiagonal());
    for (std::size_t j = 0; j < r; ++j) Hxx(j, j) += wi(j) * d2(inter[j]);
    H.bottomRightCorner(r, r) = Hxx;

    // Null-space basis of sum(dw) = 0: dw_k = z_k for k < m-1, dw_{m-1} = -sum z.
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(N, N - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      Z(k, k) = 1.0;
      Z(m - 1, k) = -1.0;
    }
    for (std::size_t j = 0; j < r; ++j) Z(m + j, m - 1 + j) = 1.0;
    const Eigen::VectorXd gz = Z.transpose() * g;
    const Eigen::MatrixXd Hz = Z.transpose() * H * Z;
    if (gz.cwiseAbs().maxCoeff() < kNewtonGradTol) break;

    // Eigenvalues of -Hz replaced by max(|mu|, floor): an ascent direction
    // that is the exact Newton step wherever I is concave.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-Hz);
    if (eig.info() != Eigen::Success) break;
    Eigen::VectorXd mu = eig.eigenvalues().cwiseAbs();
    const double lambda = 1e-10 * std::max(mu.maxCoeff(), 1e-300);
    mu = mu.cwiseMax(lambda);
    const Eigen::MatrixXd& V = eig.eigenvectors();
    const Eigen::VectorXd dz = V * (V.transpose() * gz).cwiseQuotient(mu);
    if (!dz.allFinite()) break;
    const Eigen::VectorXd d = Z * dz;
    std::vector<double> dw(m), dx(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) dw[k] = d(k);
    for (std::size_t j = 0; j < r; ++j) dx[inter[j]] = d(m + j);
    if (symmetric) {
      for (std::size_t k = 0; k < m / 2; ++k) {
        const std::size_t j = m - 1 - k;
        const double sw = 0.5 * (dw[k] + dw[j]);
        const double sx = 0.5 * (dx[k] - dx[j]);
        dw[k] = dw[j] = sw;
        dx[k] = sx;
        dx[j] = -sx;
      }
      if (m % 2 == 1) dx[m / 2] = 0.0;
    }

    double alpha = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (dw[k] < 0.0) alpha = std::min(alpha, 0.9 * a.w[k] / -dw[k]);
      if (dx[k] < 0.0) alpha = std::min(alpha, 0.5 * a.x[k] / -dx[k]);
      if (dx[k] > 0.0) alpha = std::min(alpha, 0.5 * (1.0 - a.x[k]) / dx[k]);
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (dx[k] == 0.0) continue;
      double gap = std::min(a.x[k], 1.0 - a.x[k]);
      if (k > 0) gap = std::min(gap, a.x[k] - a.x[k - 1]);
      if (k + 1 < m) gap = std::min(gap, a.x[k + 1] - a.x[k]);
      alpha = std::min(alpha, 0.5 * gap / std::abs(dx[k]));
    }
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const double closing = dx[k] - dx[k + 1];
      if (closing > 0.0) alpha = std::min(alpha, 0.5 * (a.x[k + 1] - a.x[k]) / closing);
    }
    double slope = 0.0;
    for (std::size_t k = 0; k < m; ++k) slope += g(k) * dw[k];
    for (std::size_t j = 0; j < r; ++j) slope += g(m + j) * dx[inter[j]];
    Atoms trial;
    bool accepted = false;
    while (alpha > 1e-12) {
      trial = a;
      for (std::size_t k = 0; k < m; ++k) {
        trial.w[k] += alpha * dw[k];
        trial.x[k] += alpha * dx[k];
      }
      normalize(trial.w);
      if (symmetric) mirror_fix(trial);
      const double I2 = mutual_info_of(spec, trial);
      if (I2 >= I + 1e-4 * alpha * slope || (slope < 1e-15 && I2 >= I - 1e-15)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    a = prune(trial, kNewtonDropWeight);
  }
  a = merge_close(a, merge_radius);
  if (symmetric) mirror_fix(a);
  return a;
}

Atoms to_atoms(const DiscreteInput& d) { return Atoms{d.points(), d.weights()}; }

DiscreteInput to_input(Atoms a, double prune_weight) {
  a = prune(a, prune_weight);
  return DiscreteInput(std::move(a.x), std::move(a.w));
}

std::vector<double> uniform_grid(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) g[static_cast<std::size_t>(j)] = static_cast<double>(j) / (points - 1);
  g.back() = 1.0;
  return g;
}

std::vector<double> arcsine_grid(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  const int half = (points - 1) / 2;
  for (int j = 0; j <= half; ++j) {
    const double s = std::sin(0.5 * std::numbers::pi * j / (points - 1));
    g[static_cast<std::size_t>(j)] = s * s;
    g[static_cast<std::size_t>(points - 1 - j)] = 1.0 - s * s;
  }
  g[static_cast<std::size_t>(half)] = 0.5;
  return g;
}

// Union of a sorted grid and the atoms, sorted, duplicates removed.
std::vector<double> with_atoms(std::vector<double> grid, const DiscreteInput& input) {
  grid.insert(grid.end(), input.points().begin(), input.points().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct Certificate {
  std::vector<double> grid;
  std::vector<double> density;
  double capacity = 0.0;
  double slack = 0.0;
  double equality_defect = 0.0;
  double atom_gap = 0.0;  // max over atoms of (grid max of i) - i(x_k)
};

Certificate certify(const ChannelSpec& spec, const DiscreteInput& input, std::vector<double> grid) {
  Certificate c;
  c.grid = with_atoms(std::move(grid), input);
  const OutputPmf out = induce_output(input, spec);
  const RowSet atoms(spec, input.points());
  const auto di = atoms.divergences(out.probs());
  for (std::size_t k = 0; k < di.size(); ++k) c.capacity += input.weights()[k] * di[k];

  std::vector<double> lq(out.size());
  for (std::size_t y = 0; y < out.size(); ++y) lq[y] = out[y] > 0.0 ? std::log(out[y]) : kNegInf;
  std::vector<double> row(out.size());
  c.density.resize(c.grid.size());
  double top = kNegInf;
  for (std::size_t j = 0; j < c.grid.size(); ++j) {
    log_pmf_row(spec, c.grid[j], row);
    double s = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
      if (row[y] < -745.2) continue;
      const double p = std::exp(row[y]);
      if (p == 0.0) continue;
      if (out[y] == 0.0) {
        s = kInf;
        break;
      }
      s += p * (row[y] - lq[y]);
    }
    c.density[j] = s;
    top = std::max(top, s);
  }
  c.slack = top - c.capacity;
  for (double v : di) {
    c.equality_defect = std::max(c.equality_defect, std::abs(v - c.capacity));
    c.atom_gap = std::max(c.atom_gap, top - v);
  }
  if (std::isnan(c.slack)) c.slack = kInf;
  return c;
}

// Grid points within tol of the capacity, one representative per contiguous run.
std::vector<double> active_set(const Certificate& c, double tol) {
  std::vector<double> out;
  std::size_t j = 0;
  while (j < c.grid.size()) {
    if (!(std::abs(c.density[j] - c.capacity) <= tol)) {
      ++j;
      continue;
    }
    std::size_t best = j;
    while (j < c.grid.size() && std::abs(c.density[j] - c.capacity) <= tol) {
      if (c.density[j] > c.density[best]) best = j;
      ++j;
    }
    out.push_back(c.grid[best]);
  }
  return out;
}

SolveReport make_report(const ChannelSpec& spec, const DiscreteInput& input, const Certificate& c,
                        double tol, int iterations, bool converged) {
  SolveReport r{spec.trials(), input, induce_output(input, spec), c.capacity, c.slack,
                c.equality_defect, static_cast<int>(input.size()), active_set(c, tol), iterations,
                converged};
  return r;
}

// Strict local maxima of i(x) - C above tol, away from existing atoms, largest first.
std::vector<double> escape_candidates(const Certificate& c, const DiscreteInput& input, double tol,
                                      double radius) {
  std::vector<std::pair<double, double>> found;
  for (std::size_t j = 1; j + 1 < c.grid.size(); ++j) {
    const double v = c.density[j] - c.capacity;
    if (!(v > tol)) continue;
    if (!(c.density[j] > c.density[j - 1] && c.density[j] >= c.density[j + 1])) continue;
    bool far = true;
    for (double x : input.points()) far = far && std::abs(x - c.grid[j]) > radius;
    if (far) found.emplace_back(v, c.grid[j]);
  }
  std::sort(found.begin(), found.end(), std::greater<>());
  std::vector<double> out;
  for (const auto& [v, x] : found) {
    if (static_cast<int>(out.size()) == kMaxEscapes || v < 0.999 * found.front().first) break;
    out.push_back(x);
  }
  return out;
}

Atoms seed(const ChannelSpec& spec, const SolverConfig& config) {
  const auto grid = arcsine_grid(config.grid_size);
  const BaResult ba = blahut_arimoto(spec, grid, 1e-9, {}, kSeedIters);
  const RowSet rows(spec, grid);
  const auto d = rows.divergences(rows.mix(ba.weights));
  Atoms a;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool left = k == 0 || d[k] > d[k - 1];
    const bool right = k + 1 == grid.size() || d[k] >= d[k + 1];
    if (left && right) a.x.push_back(grid[k]);
  }
  if (a.x.front() != 0.0) a.x.insert(a.x.begin(), 0.0);
  if (a.x.back() != 1.0) a.x.push_back(1.0);
  a.w.assign(a.x.size(), 1.0 / static_cast<double>(a.x.size()));
  if (config.symmetrize) a = symmetrize(a, config.merge_radius);
  return a;
}

Atoms reweight(const ChannelSpec& spec, Atoms a) {
  const BaResult ba = blahut_arimoto(spec, a.x, kSupportBaTol, a.w, kSupportBaIters);
  a.w = ba.weights;
  return a;
}

}  // namespace

void SolverConfig::validate() const {
  if (grid_size < 3 || grid_size % 2 == 0) throw std::invalid_argument("grid_size must be odd and >= 3");
  if (!(ba_tol > 0.0)) throw std::invalid_argument("ba_tol must be > 0");
  if (!(kkt_tol > 0.0)) throw std::invalid_argument("kkt_tol must be > 0");
  if (!(merge_radius > 0.0)) throw std::invalid_argument("merge_radius must be > 0");
  if (!(prune_weight > 0.0)) throw std::invalid_argument("prune_weight must be > 0");
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
}

BaResult blahut_arimoto(const ChannelSpec& spec, std::span<const double> grid, double tol,
                        std::span<const double> initial, int max_iters) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    throw std::invalid_argument("blahut_arimoto: grid needs >= 2 points including 0 and 1");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("blahut_arimoto: grid must be increasing");
  }
  if (!initial.empty() && initial.size() != grid.size()) {
    throw std::invalid_argument("blahut_arimoto: initial weights length mismatch");
  }
  const RowSet rows(spec, grid);
  BaResult res;
  if (initial.empty()) {
    res.weights.assign(grid.size(), 1.0 / static_cast<double>(grid.size()));
  } else {
    res.weights.assign(initial.begin(), initial.end());
    normalize(res.weights);
  }
  for (int it = 0;; ++it) {
    const auto d = rows.divergences(rows.mix(res.weights));
    double low = 0.0, high = kNegInf;
    for (std::size_t k = 0; k < d.size(); ++k) {
      low += res.weights[k] * d[k];
      high = std::max(high, d[k]);
    }
    res.capacity_low = low;
    res.capacity_high = high;
    res.iterations = it;
    if (high - low <= tol) {
      res.converged = true;
      break;
    }
    if (it >= max_iters) break;
    for (std::size_t k = 0; k < d.size(); ++k) res.weights[k] *= std::exp(d[k] - high);
    normalize(res.weights);
    // Subnormal weights would only slow the arithmetic down.
    for (auto& w : res.weights) {
      if (w < kBaWeightFloor) w = 0.0;
    }
  }
  return res;
}

DiscreteInput refine_support(const ChannelSpec& spec, const DiscreteInput& coarse,
                             const SolverConfig& config) {
  config.validate();
  Atoms a = to_atoms(coarse);
  if (config.symmetrize) a = symmetrize(a, config.merge_radius);
  a = newton_polish(spec, a, config.merge_radius, config.symmetrize);
  if (config.symmetrize) a = symmetrize(a, config.merge_radius);
  return to_input(a, config.prune_weight);
}

SolveReport evaluate_input(const ChannelSpec& spec, const DiscreteInput& input, int grid_size,
                           double kkt_tol) {
  if (grid_size < 2) throw std::invalid_argument("certification grid needs >= 2 points");
  const Certificate c = certify(spec, input, uniform_grid(grid_size));
  return make_report(spec, input, c, kkt_tol, 0,
                     c.slack <= kkt_tol && c.equality_defect <= kkt_tol && c.atom_gap <= kkt_tol);
}

SolveReport solve_capacity(const ChannelSpec& spec, const SolverConfig& config) {
  config.validate();
  const int n = spec.trials();
  if (n > kMaxTrials) {
    throw std::invalid_argument("n = " + std::to_string(n) + " exceeds the supported range n <= " +
                                std::to_string(kMaxTrials));
  }
  const auto cert_grid = uniform_grid(10 * (config.grid_size - 1) + 1);
  if (n == 1) {
    const DiscreteInput input({0.0, 1.0}, {0.5, 0.5});
    return make_report(spec, input, certify(spec, input, cert_grid), config.kkt_tol, 0, true);
  }

  Atoms a = reweight(spec, seed(spec, config));
  DiscreteInput best = to_input(a, config.prune_weight);
  Certificate best_cert = certify(spec, best, cert_grid);
  for (int outer = 1; outer <= config.max_outer_iters; ++outer) {
    a = newton_polish(spec, a, config.merge_radius, config.symmetrize);
    if (config.symmetrize) a = symmetrize(a, config.merge_radius);
    const DiscreteInput current = to_input(a, config.prune_weight);
    const Certificate c = certify(spec, current, cert_grid);
    if (c.slack < best_cert.slack) {
      best = current;
      best_cert = c;
    }
    if (c.slack <= config.kkt_tol && c.equality_defect <= config.kkt_tol) {
      return make_report(spec, current, c, config.kkt_tol, outer, true);
    }
    const auto cand = escape_candidates(c, current, config.kkt_tol, config.merge_radius);
    a = to_atoms(current);
    std::vector<double> extra = cand;
    if (config.symmetrize) {
      for (double x : cand) extra.push_back(1.0 - x);
    }
    for (double x : extra) {
      const auto pos = std::lower_bound(a.x.begin(), a.x.end(), x);
      if (pos != a.x.end() && std::abs(*pos - x) <= config.merge_radius) continue;
      if (pos != a.x.begin() && std::abs(*(pos - 1) - x) <= config.merge_radius) continue;
      const auto idx = pos - a.x.begin();
      a.x.insert(pos, x);
      a.w.insert(a.w.begin() + idx, kEscapeWeight);
    }
    normalize(a.w);
    a = reweight(spec, a);
  }
  return make_report(spec, best, best_cert, config.kkt_tol, config.max_outer_iters, false);
}

KktSummary kkt_verify(const SolveReport& report, const ChannelSpec& spec, int grid_size, double tol) {
  if (report.n != spec.trials()) throw std::invalid_argument("kkt_verify: report and channel disagree on n");
  if (grid_size < 2) throw std::invalid_argument("kkt_verify: grid needs >= 2 points");
  const DiscreteInput& in = report.input;
  Certificate c = certify(spec, in, uniform_grid(grid_size));
  // Judge against the reported capacity, not a recomputed one.
  const double cap = report.capacity_nats;
  c.slack += c.capacity - cap;
  c.equality_defect = 0.0;
  const RowSet atoms(spec, in.points());
  const auto di = atoms.divergences(report.output.probs());
  for (double v : di) c.equality_defect = std::max(c.equality_defect, std::abs(v - cap));
  c.capacity = cap;

  KktSummary s;
  s.slack = c.slack;
  s.equality_defect = c.equality_defect;
  s.active_set = active_set(c, tol);
  s.grid_points = static_cast<int>(c.grid.size());
  s.kkt_inequality = s.slack <= tol;
  s.kkt_equality = s.equality_defect <= tol && c.atom_gap <= tol;

  const auto& x = in.points();
  const auto& w = in.weights();
  s.endpoints_in_support = x.front() == 0.0 && x.back() == 1.0;
  const double p0 = report.output[0];
  const double pn = report.output[report.output.size() - 1];
  s.capacity_identity_defect = std::max(std::abs(cap + std::log(p0)), std::abs(cap + std::log(pn)));
  if (std::isnan(s.capacity_identity_defect)) s.capacity_identity_defect = kInf;
  s.capacity_identity = s.capacity_identity_defect <= 1e-8;

  const double edge = 1.0 / spec.trials();
  int low = 0, high = 0;
  for (double v : x) {
    low += v > 0.0 && v <= edge;
    high += v >= 1.0 - edge && v < 1.0;
  }
  s.edge_intervals = low <= 1 && high <= 1;

  const std::size_t m = x.size();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = m - 1 - k;
    const double d = std::max(std::abs(w[k] - w[j]), std::abs(x[k] - (1.0 - x[j])));
    s.symmetry_defect = std::max(s.symmetry_defect, d);
  }
  s.symmetric = s.symmetry_defect <= 1e-9;
  s.active_set_bound = static_cast<int>(s.active_set.size()) <= spec.trials() + 1;
  return s;
}

}  // namespace bincap
