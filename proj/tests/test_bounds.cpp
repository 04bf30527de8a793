#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bincap/bounds.hpp"
#include "bincap/solver.hpp"
#include "support.hpp"

using namespace bincap;

namespace {

const SolveReport& solved(int n) {
  static std::vector<std::optional<SolveReport>> cache(130);
  if (!cache[n]) cache[n] = solve_capacity(ChannelSpec(n));
  return *cache[n];
}

const double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("capacity lower bound") {
  CHECK(capacity_lower_bound(1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double second = std::log(kPi) - 0.5 * std::log(2 * kPi * M_E * (1.0 / 8 + 1.0 / 12)) +
                        std::log(1.0 / 16) / std::sqrt(kPi * 1.25) - std::log(4.0) - 1.0;
  CHECK(second == doctest::Approx(-3.275).epsilon(1e-3));
  CHECK(capacity_lower_bound(3) <= std::log(19.0 / 8));
  CHECK(std::abs(capacity_lower_bound(1000) - 0.5 * std::log(1000.0)) <= 3.0);
  CHECK_THROWS_AS(capacity_lower_bound(0), std::invalid_argument);
}

TEST_CASE("capacity upper bound") {
  CHECK(capacity_upper_bound(1) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(capacity_upper_bound(2) >= std::log(17.0 / 8));
  CHECK(std::abs(capacity_upper_bound(1000) - 0.5 * std::log(1000.0)) <= 4.0);
  CHECK(capacity_upper_bound(1000) == doctest::Approx(std::log(502.0)).epsilon(1e-15));
  // Past n of about 1190 the dual branch is the smaller one.
  const double m = 4096;
  const double dual = std::log(kPi * (m + 1)) - 0.5 * std::log(m) + 1.5 + std::pow(2.0, -(m + 1)) * std::log(m) +
                      0.5 * std::log(1.5 * (1 + 1 / m));
  CHECK(capacity_upper_bound(4096) == doctest::Approx(dual).epsilon(1e-14));
  CHECK(dual < std::log(3.0 + 2047));
}

TEST_CASE("bounds are ordered and their gap stays bounded") {
  for (int n = 1; n <= 4096; ++n) {
    const double lo = capacity_lower_bound(n), hi = capacity_upper_bound(n);
    CHECK(lo <= hi);
    CHECK(hi - lo <= 8.0);
    CHECK(std::abs(lo - 0.5 * std::log(n)) <= 4.0);
    CHECK(std::abs(hi - 0.5 * std::log(n)) <= 4.0);
  }
}

TEST_CASE("g_n symmetry and uniform bound") {
  for (int t = 0; t < 200; ++t) {
    const int n = testsupport::uniform_int(1, 200);
    const double x = testsupport::uniform01();
    CHECK(g_n(x, n) == doctest::Approx(g_n(1.0 - x, n)).epsilon(1e-10));
  }
  CHECK(std::isfinite(g_n(0.5, 10)));
  CHECK(g_n(0.5, 10) <= g_n_uniform_bound(10));
  CHECK(g_n(0.001, 5) <= g_n_uniform_bound(5));
  CHECK(g_n_uniform_bound(1) == doctest::Approx(0.5 * std::log(2 * kPi) + 0.5 + 0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(g_n_uniform_bound(1) == doctest::Approx(1.968).epsilon(1e-3));
  CHECK(g_n_uniform_bound(100000) ==
        doctest::Approx(0.5 * std::log(2 * kPi) + 0.5 + 0.5 * std::log(1.5)).epsilon(1e-5));
  CHECK_THROWS_AS(g_n(1.5, 3), std::domain_error);
}

TEST_CASE("grid maximum of g_n stays below the uniform bound") {
  for (int n = 1; n <= 100; ++n) {
    double mx = -INFINITY;
    for (int k = 0; k <= 10000; ++k) mx = std::max(mx, g_n(k / 10000.0, n));
    INFO("n=" << n);
    CHECK(mx <= g_n_uniform_bound(n));
  }
}

TEST_CASE("crest factor of the closed-form optima") {
  const auto& r2 = solved(2);
  CHECK(crest_factor(r2, 0.5) == doctest::Approx(std::log(4.0)).epsilon(1e-9));
  CHECK(std::abs(crest_factor(r2, 0.5) - std::log(4.0)) <= 1e-8);
  CHECK(std::abs(crest_factor(r2, 0.0) - std::log(16.0 / 15)) <= 1e-8);
  CHECK(std::abs(crest_factor(r2, 1.0) - std::log(16.0 / 15)) <= 1e-8);
  CHECK(std::abs(crest_factor_lb1(2, 0.5) - std::log(4.0)) <= 1e-14);
  CHECK(std::abs(crest_factor(solved(1), 0.0)) <= 1e-12);
  CHECK_THROWS_AS(crest_factor(r2, 0.25), std::domain_error);
  CHECK_THROWS_AS(crest_factor_from_weight(r2, 0.25), std::domain_error);
}

TEST_CASE("crest factor identity and dominance over the lower bounds") {
  for (int n = 1; n <= 40; ++n) {
    const auto& r = solved(n);
    for (double x : r.input.points()) {
      const double d = crest_factor(r, x);
      INFO("n=" << n << " x=" << x);
      CHECK(std::abs(d - crest_factor_from_weight(r, x)) <= 1e-8);
      CHECK(d >= -1e-12);
      if (x <= 0.0 || x >= 1.0) continue;
      CHECK(d >= crest_factor_lb1(n, x) - 1e-8);
      if (x != 0.5) CHECK(d >= crest_factor_lb2(n, x) - 1e-8);
    }
  }
  CHECK(crest_factor_lb1(3, 0.5) <= crest_factor(solved(3), 0.5));
}

TEST_CASE("crest factor lower bound examples") {
  CHECK(crest_factor_lb1(10, 0.1) >= 0.0);
  CHECK(std::isfinite(crest_factor_lb1(10, 0.1)));
  CHECK(crest_factor_lb2(10, 0.1) == doctest::Approx(std::log1p(std::pow(1.0 / 9, 8))).epsilon(1e-12));
  CHECK(crest_factor_lb2(10, 0.1) == doctest::Approx(2.32e-8).epsilon(1e-2));
  CHECK(crest_factor_lb2(2, 0.25) >= 0.0);
  for (int n : {1, 5, 50}) {
    CHECK(crest_factor_lb2(n, 0.5 - 1e-9) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(crest_factor_lb2(n, 0.5 + 1e-9) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }
  CHECK(std::isfinite(crest_factor_lb2(4000, 1e-6)));
  CHECK_THROWS_AS(crest_factor_lb1(3, 0.0), std::domain_error);
  CHECK_THROWS_AS(crest_factor_lb1(3, 1.0), std::domain_error);
  CHECK_THROWS_AS(crest_factor_lb2(3, 0.5), std::domain_error);
  CHECK_THROWS_AS(crest_factor_lb2(3, 0.0), std::domain_error);
}

TEST_CASE("support count identity") {
  CHECK(support_count_identity(solved(2)) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(support_count_identity(solved(1)) == doctest::Approx(2.0).epsilon(1e-12));
  for (int n = 1; n <= 32; ++n) {
    const auto& r = solved(n);
    CHECK(std::abs(support_count_identity(r) - r.support_size) <= 1e-6 * r.support_size);
  }
}

TEST_CASE("cardinality bounds") {
  auto b2 = cardinality_bounds(2, std::log(17.0 / 8));
  CHECK(b2.lower == doctest::Approx(2.125).epsilon(1e-14));
  CHECK(b2.upper == 3);
  CHECK(solved(2).support_size >= static_cast<int>(std::ceil(b2.lower)));
  CHECK(solved(2).support_size <= b2.upper);
  auto b1 = cardinality_bounds(1, std::log(2.0));
  CHECK(b1.lower == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b1.upper == 2);
  const auto& r = solved(100);
  auto b = cardinality_bounds(100, r.capacity_nats);
  CHECK(b.upper == 52);
  CHECK(r.support_size >= static_cast<int>(std::ceil(b.lower - 1e-9)));
  CHECK(r.support_size <= b.upper);
  CHECK_THROWS_AS(cardinality_bounds(3, -0.1), std::invalid_argument);
}

TEST_CASE("solved capacities lie between the closed-form bounds") {
  for (int n : {1, 2, 3, 5, 8, 13, 21, 32, 64, 100, 128}) {
    const auto& r = solved(n);
    INFO("n=" << n);
    CHECK(capacity_lower_bound(n) - 1e-9 <= r.capacity_nats);
    CHECK(r.capacity_nats <= capacity_upper_bound(n) + std::max(r.kkt_slack, 1e-9));
    const double half = 0.5 * std::log(n);
    const double dev = std::max(std::abs(capacity_lower_bound(n) - half), std::abs(capacity_upper_bound(n) - half));
    CHECK(std::abs(r.capacity_nats - half) <= dev);
  }
}

TEST_CASE("bounds report") {
  auto b = make_bounds_report(7);
  CHECK(b.n == 7);
  CHECK(b.cap_lower <= b.cap_upper);
  CHECK(b.card_lower == doctest::Approx(std::exp(b.cap_lower)));
  CHECK(b.card_upper == 5);
  CHECK(b.witsenhausen == 8);
  for (int n = 2; n <= 500; ++n) CHECK(make_bounds_report(n).card_upper <= make_bounds_report(n).witsenhausen);
  auto s = make_bounds_report(2, std::log(17.0 / 8));
  CHECK(s.card_lower == doctest::Approx(2.125));
}
