// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bincap/binomial_kernel.hpp"
#include "bincap/bounds.hpp"
#include "bincap/distributions.hpp"
#include "bincap/info_density.hpp"
#include "bincap/oracles.hpp"
#include "bincap/solver.hpp"
#include "derivative_forms.hpp"
#include "support.hpp"

using namespace bincap;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects the first failure message of a criterion.
struct Check {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

std::string fmt_n(const char* what, int n, double v) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s at n=%d (%.3e)", what, n, v);
  return buf;
}

std::map<int, SolveReport> solved;
std::map<int, double> solve_seconds;

const SolveReport& solve(int n) {
  auto it = solved.find(n);
  if (it == solved.end()) {
    const auto t0 = Clock::now();
    it = solved.emplace(n, solve_capacity(ChannelSpec(n))).first;
    solve_seconds[n] = seconds_since(t0);
  }
  return it->second;
}

int failures = 0;

void report(int k, const char* title, const std::function<Check()>& body) {
  const auto t0 = Clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.why = std::string("exception: ") + e.what();
  }
  const double dt = seconds_since(t0);
  if (!c.ok) ++failures;
  std::printf("%s [%d] %s (%.1f s)%s%s\n", c.ok ? "PASS" : "FAIL", k, title, dt, c.ok ? "" : ": ",
              c.why.c_str());
  std::fflush(stdout);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Central differences with steps scaled to the distance from the nearer endpoint.
double fd1(const DiscreteInput& d, const ChannelSpec& s, double x) {
  const auto out = induce_output(d, s);
  const double h = 1e-5 * std::min(x, 1 - x);
  return (info_density(x + h, out, s) - info_density(x - h, out, s)) / (2 * h);
}

double fd2(const DiscreteInput& d, const ChannelSpec& s, double x) {
  const auto out = induce_output(d, s);
  const double h = 1e-3 * std::min(x, 1 - x);
  return (info_density(x + h, out, s) - 2 * info_density(x, out, s) + info_density(x - h, out, s)) / (h * h);
}

}  // namespace

int main() {
  report(1, "closed-form optima for n = 1, 2, 3", [] {
    Check c;
    const double caps[] = {std::log(2.0), std::log(17.0 / 8), std::log(19.0 / 8)};
    for (int n = 1; n <= 3; ++n) {
      const auto& r = solve(n);
      const auto exact = exact_solution(n);
      c.require(solve_seconds[n] < 1.0, fmt_n("runtime", n, solve_seconds[n]));
      c.require(std::abs(r.capacity_nats - caps[n - 1]) <= 1e-9, fmt_n("capacity", n, r.capacity_nats));
      c.require(r.input.size() == exact.points.size(), fmt_n("support size", n, r.input.size()));
      if (r.input.size() != exact.points.size()) continue;
      for (std::size_t k = 0; k < r.input.size(); ++k) {
        c.require(std::abs(r.input.points()[k] - exact.points[k].value()) <= 1e-7,
                  fmt_n("support point", n, r.input.points()[k]));
        c.require(std::abs(r.input.weights()[k] - exact.weights[k].value()) <= 1e-7,
                  fmt_n("weight", n, r.input.weights()[k]));
      }
    }
    return c;
  });

  report(2, "KKT certificate for n = 1..32", [] {
    Check c;
    double total = 0.0;
    for (int n = 1; n <= 32; ++n) {
      const auto& r = solve(n);
      total += solve_seconds[n];
      const auto k = kkt_verify(r, ChannelSpec(n), 20481);
      c.require(r.converged, fmt_n("not converged", n, r.kkt_slack));
      c.require(k.grid_points >= 20001, fmt_n("grid", n, k.grid_points));
      c.require(k.slack <= 1e-8, fmt_n("slack", n, k.slack));
      c.require(k.equality_defect <= 1e-8, fmt_n("equality defect", n, k.equality_defect));
    }
    c.require(total < 60.0, fmt_n("total runtime up to", 32, total));
    return c;
  });

  const std::vector<int> sandwich_ns = [] {
    std::vector<int> v;
    for (int n = 1; n <= 32; ++n) v.push_back(n);
    for (int n : {64, 128, 256, 512, 1024}) v.push_back(n);
    return v;
  }();

  report(3, "capacity between the closed-form bounds", [&] {
    Check c;
    for (int n : sandwich_ns) {
      const auto& r = solve(n);
      c.require(r.converged, fmt_n("not converged", n, r.kkt_slack));
      c.require(capacity_lower_bound(n) <= r.capacity_nats + 1e-8, fmt_n("below lower bound", n, r.capacity_nats));
      c.require(r.capacity_nats <= capacity_upper_bound(n) + 1e-8, fmt_n("above upper bound", n, r.capacity_nats));
    }
    return c;
  });

  report(4, "half log n scaling", [&] {
    Check c;
    for (const auto& [n, r] : solved) {
      c.require(std::abs(r.capacity_nats - 0.5 * std::log(n)) <= 4.0, fmt_n("deviation", n, r.capacity_nats));
    }
    for (int n = 1; n <= 4096; ++n) {
      const double gap = capacity_upper_bound(n) - capacity_lower_bound(n);
      c.require(gap <= 8.0, fmt_n("bound gap", n, gap));
    }
    return c;
  });

  report(5, "structural properties of the optima for n <= 32", [] {
    Check c;
    for (int n = 1; n <= 32; ++n) {
      const auto& r = solve(n);
      const ChannelSpec spec(n);
      const auto k = kkt_verify(r, spec, 20481);
      const auto& pts = r.input.points();
      const auto& w = r.input.weights();
      const double cap = r.capacity_nats;
      c.require(pts.front() == 0.0 && pts.back() == 1.0, fmt_n("endpoints", n, pts.front()));
      const auto py = r.output.probs();
      c.require(std::abs(cap + std::log(py.front())) <= 1e-8, fmt_n("-log P_Y(0)", n, -std::log(py.front())));
      c.require(std::abs(cap + std::log(py.back())) <= 1e-8, fmt_n("-log P_Y(n)", n, -std::log(py.back())));
      int low = 0, high = 0;
      for (double x : pts) {
        low += x > 0.0 && x <= 1.0 / n;
        high += x >= 1.0 - 1.0 / n && x < 1.0;
      }
      c.require(low <= 1 && high <= 1, fmt_n("atoms next to an endpoint", n, std::max(low, high)));
      c.require(k.symmetry_defect <= 1e-9, fmt_n("symmetry defect", n, k.symmetry_defect));
      const int size = static_cast<int>(pts.size());
      c.require(size >= static_cast<int>(std::ceil(std::exp(cap) - 1e-9)), fmt_n("support below e^C", n, size));
      c.require(size <= 2 + n / 2, fmt_n("support above 2 + n/2", n, size));
      for (double v : w) c.require(v <= std::exp(-cap) + 1e-9, fmt_n("weight above e^-C", n, v));
      c.require(static_cast<int>(k.active_set.size()) <= n + 1, fmt_n("active set", n, k.active_set.size()));
      c.require(static_cast<int>(r.active_set_estimate.size()) <= n + 1,
                fmt_n("active set estimate", n, r.active_set_estimate.size()));
    }
    return c;
  });

  report(6, "derivatives against finite differences and alternative forms", [] {
    Check c;
    std::vector<std::pair<int, DiscreteInput>> cases;
    for (int n = 1; n <= 3; ++n) cases.emplace_back(n, exact_solution(n).input());
    for (int n : {5, 10, 20}) cases.emplace_back(n, solve(n).input);
    for (const auto& [n, d] : cases) {
      const ChannelSpec s(n);
      DensityEvaluator ev(d, s);
      for (int t = 0; t < 50; ++t) {
        double x = 0.0;
        while (!(x > 1e-6 && x < 1 - 1e-6)) x = testsupport::uniform01();
        const double p = ev.prime(x), q = ev.second(x);
        c.require(rel_err(fd1(d, s, x), p) <= 1e-5, fmt_n("i' finite difference", n, rel_err(fd1(d, s, x), p)));
        c.require(rel_err(fd2(d, s, x), q) <= 1e-3, fmt_n("i'' finite difference", n, rel_err(fd2(d, s, x), q)));
        if (n < 2) continue;
        const double tol = 1e-9 * std::max(1.0, std::abs(q));
        const double a = forms::second_via_prime(d, n, x, p);
        c.require(std::abs(a - q) <= tol, fmt_n("Y-weighted i'' form", n, a - q));
        if (n < 3) continue;
        const double b = forms::second_reduced(d, n, x), e = forms::second_bregman(d, n, x, p);
        c.require(std::abs(b - q) <= tol, fmt_n("reduced i'' form", n, b - q));
        c.require(std::abs(e - q) <= tol, fmt_n("Bregman i'' form", n, e - q));
      }
    }
    return c;
  });

  report(7, "crest factor", [] {
    Check c;
    const auto& r2 = solve(2);
    const double half = crest_factor(r2, 0.5);
    c.require(std::abs(half - std::log(4.0)) <= 1e-8, fmt_n("D(1/2)", 2, half));
    c.require(std::abs(crest_factor_lb1(2, 0.5) - half) <= 1e-8, fmt_n("lb1 at 1/2", 2, crest_factor_lb1(2, 0.5)));
    const double zero = crest_factor(r2, 0.0);
    c.require(std::abs(zero - std::log(16.0 / 15)) <= 1e-8, fmt_n("D(0)", 2, zero));
    for (int n = 1; n <= 32; ++n) {
      const auto& r = solve(n);
      const double id = support_count_identity(r);
      c.require(std::abs(id - r.support_size) <= 1e-6, fmt_n("support count identity", n, id));
      for (double x : r.input.points()) {
        if (x <= 0.0 || x >= 1.0) continue;
        const double d = crest_factor(r, x);
        c.require(d >= crest_factor_lb1(n, x) - 1e-9, fmt_n("lb1 exceeds crest factor", n, x));
        if (x != 0.5) c.require(d >= crest_factor_lb2(n, x) - 1e-9, fmt_n("lb2 exceeds crest factor", n, x));
      }
    }
    return c;
  });

  report(8, "binomial entropy bounds", [] {
    Check c;
    for (int n = 1; n <= 200; ++n) {
      const ChannelSpec s(n);
      for (int j = 0; j <= 200; ++j) {
        const double x = j / 200.0;
        const double lo = binomial_entropy_lower(s, x), h = binomial_entropy_exact(s, x),
                     hi = binomial_entropy_upper(s, x);
        c.require(lo <= h + 1e-12, fmt_n("lower bound above entropy", n, lo - h));
        c.require(h <= hi + 1e-12, fmt_n("entropy above upper bound", n, h - hi));
      }
    }
    return c;
  });

  report(9, "uniform bound on g_n", [] {
    Check c;
    for (int n = 1; n <= 100; ++n) {
      double mx = -INFINITY;
      for (int k = 0; k <= 10000; ++k) mx = std::max(mx, g_n(k / 10000.0, n));
      c.require(mx <= g_n_uniform_bound(n), fmt_n("grid max above bound", n, mx - g_n_uniform_bound(n)));
    }
    return c;
  });

  report(10, "posterior mean is non-decreasing in the output", [] {
    Check c;
    for (int t = 0; t < 200; ++t) {
      const auto ri = testsupport::random_input(testsupport::uniform_int(1, 12), t % 3 == 0);
      const DiscreteInput d(ri.points, ri.weights);
      for (int n = 1; n <= 50; ++n) {
        const ChannelSpec s(n);
        double prev = -INFINITY;
        for (int y = 0; y <= n; ++y) {
          double m;
          try {
            m = posterior_mean(d, s, y);
          } catch (const UndefinedPosterior&) {
            continue;
          }
          c.require(m >= prev - 1e-12, fmt_n("posterior mean decreases", n, m - prev));
          prev = m;
        }
      }
    }
    return c;
  });

  report(11, "channel matrix on n + 1 distinct points is nonsingular", [] {
    Check c;
    for (int n = 1; n <= 15; ++n) {
      const ChannelSpec s(n);
      for (int t = 0; t < 100; ++t) {
        const auto pts = testsupport::random_input(n + 1).points;
        const auto ld = channel_matrix_logdet(s, pts);
        c.require(ld.sign != 0 && std::isfinite(ld.log_abs_det), fmt_n("singular", n, ld.log_abs_det));
      }
    }
    const std::vector<double> s2{0.0, 0.5, 1.0};
    const auto ld = channel_matrix_logdet(ChannelSpec(2), s2);
    const double det = ld.sign * std::exp(ld.log_abs_det);
    c.require(std::abs(det - 0.5) <= 1e-14, fmt_n("determinant on {0, 1/2, 1}", 2, det));
    return c;
  });

  report(12, "grid oracle agrees with the solver for n = 1..16", [] {
    Check c;
    for (int n = 1; n <= 16; ++n) {
      const double bf = brute_force_grid_capacity(ChannelSpec(n), 4097, 1e-5);
      const double diff = std::abs(bf - solve(n).capacity_nats);
      c.require(diff <= 1e-5, fmt_n("oracle disagreement", n, diff));
    }
    return c;
  });

  std::printf("%s: %d of 12 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
