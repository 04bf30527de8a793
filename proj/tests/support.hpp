#pragma once

// Reference computations that share nothing with the library: direct
// products in 50-digit arithmetic and exact rational elimination.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace testsupport {

using Big = boost::multiprecision::cpp_bin_float_50;
using Rat = boost::multiprecision::cpp_rational;

inline Big choose(int n, int y) {
  Big c = 1;
  for (int k = 1; k <= y; ++k) c = c * (n - y + k) / k;
  return c;
}

inline Big pmf(int n, int y, const Big& x) {
  return choose(n, y) * boost::multiprecision::pow(x, y) * boost::multiprecision::pow(Big(1) - x, n - y);
}

inline double pmf_d(int n, int y, double x) { return static_cast<double>(pmf(n, y, Big(x))); }

inline double entropy_d(int n, double x) {
  Big h = 0;
  for (int y = 0; y <= n; ++y) {
    const Big p = pmf(n, y, Big(x));
    if (p > 0) h -= p * boost::multiprecision::log(p);
  }
  return static_cast<double>(h);
}

inline Rat rat_pow(const Rat& x, int k) {
  Rat r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Exact determinant of the (n+1)x(n+1) matrix P(i | x_k) for rational points.
inline Rat channel_det(int n, const std::vector<Rat>& pts) {
  const int m = n + 1;
  std::vector<std::vector<Rat>> a(m, std::vector<Rat>(m));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      Rat c = 1;
      for (int j = 1; j <= i; ++j) c = c * (n - i + j) / j;
      a[i][k] = c * rat_pow(pts[k], i) * rat_pow(Rat(1) - pts[k], n - i);
    }
  }
  Rat det = 1;
  for (int c = 0; c < m; ++c) {
    int piv = -1;
    for (int r = c; r < m; ++r) {
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < m; ++r) {
      const Rat f = a[r][c] / a[c][c];
      for (int j = c; j < m; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20260101);
  return g;
}

inline double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// Random sorted distinct points in [0,1] with random positive weights summing to 1.
struct RandomInput {
  std::vector<double> points;
  std::vector<double> weights;
};

inline RandomInput random_input(int atoms, bool with_endpoints = false) {
  std::vector<double> pts;
  if (with_endpoints) {
    pts = {0.0, 1.0};
  }
  while (static_cast<int>(pts.size()) < atoms) {
    const double x = uniform01();
    bool ok = true;
    for (double p : pts) ok = ok && std::abs(p - x) > 1e-6;
    if (ok) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> w(pts.size());
  double s = 0.0;
  for (auto& v : w) {
    v = 0.05 + uniform01();
    s += v;
  }
  for (auto& v : w) v /= s;
  // Push rounding error of the sum into the largest weight.
  double t = 0.0;
  for (double v : w) t += v;
  *std::max_element(w.begin(), w.end()) += 1.0 - t;
  return {pts, w};
}

}  // namespace testsupport
