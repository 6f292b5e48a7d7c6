#pragma once

// Independent reference computations for the tests. Nothing in here calls the
// library code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// Chi-square(df) density from std::lgamma.
inline double chi2_pdf(double x, int df) {
  if (x <= 0.0) return 0.0;
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

// P(X > x) by composite 10-point Gauss-Legendre over [x, x + far], with the
// far end well past any mass that matters at double precision.
inline double chi2_survival_quadrature(double x, int df) {
  static const double nodes[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                  0.8650633666889845, 0.9739065285171717};
  static const double weights[5] = {0.2955242247147529, 0.2692667193099963,
                                    0.2190863625159820, 0.1494513491505806,
                                    0.0666713443086881};
  const double upper = x + 40.0 * std::sqrt(2.0 * df) + 400.0;
  const double h = 0.125;
  double sum = 0.0;
  for (double a = x; a < upper; a += h) {
    const double mid = a + 0.5 * h, half = 0.5 * h;
    double part = 0.0;
    for (int n = 0; n < 5; ++n) {
      part += weights[n] * (chi2_pdf(mid - half * nodes[n], df) + chi2_pdf(mid + half * nodes[n], df));
    }
    sum += part * half;
  }
  return sum;
}

// Every integer table of the given shape with cells in [lo, hi] whose three
// two-way margins equal those of `reference`, by plain odometer over all
// (hi - lo + 1)^(I*J*K) candidates. Tables come out in lexicographic order.
inline std::vector<std::vector<std::int64_t>> brute_force_fiber(
    std::size_t I, std::size_t J, std::size_t K, const std::vector<std::int64_t>& reference,
    std::int64_t lo, std::int64_t hi) {
  const std::size_t n = I * J * K;
  auto margins = [&](const std::vector<std::int64_t>& u) {
    std::vector<std::int64_t> m(J * K + I * K + I * J, 0);
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < K; ++k) {
          const auto v = u[(i * J + j) * K + k];
          m[j * K + k] += v;
          m[J * K + i * K + k] += v;
          m[J * K + I * K + i * J + j] += v;
        }
    return m;
  };
  const auto target = margins(reference);
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> u(n, lo);
  while (true) {
    if (margins(u) == target) out.push_back(u);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (u[pos] < hi) {
        ++u[pos];
        break;
      }
      u[pos] = lo;
      if (pos == 0) return out;
    }
  }
}

// Fitted means of a 2x2x2 table. The fiber through the observed table is the
// line u + x * m for the single basic move m, and the fit is the point on it
// whose odds ratio is one: prod(+ cells) == prod(- cells). Bisection on x.
inline std::vector<double> mle_2x2x2(const std::vector<double>& u) {
  const int sign[8] = {1, -1, -1, 1, -1, 1, 1, -1};
  auto gap = [&](double x) {
    double plus = 0.0, minus = 0.0;
    for (int c = 0; c < 8; ++c) {
      const double v = u[c] + sign[c] * x;
      (sign[c] > 0 ? plus : minus) += std::log(v);
    }
    return plus - minus;
  };
  double lo = -1e300, hi = 1e300;
  for (int c = 0; c < 8; ++c) {
    // keep every cell positive
    if (sign[c] > 0) lo = std::max(lo, -u[c]);
    else hi = std::min(hi, u[c]);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) < 0) lo = mid;
    else hi = mid;
  }
  const double x = 0.5 * (lo + hi);
  std::vector<double> out(8);
  for (int c = 0; c < 8; ++c) out[c] = u[c] + sign[c] * x;
  return out;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Exact conditional p-value for a 2x2x2 table whose fitted means are `fit`.
// Walks the one-parameter fiber, weighting each table by prod 1/u! directly.
inline double exact_p_2x2x2(const std::vector<int>& u, const std::vector<double>& fit) {
  const int sign[8] = {1, -1, -1, 1, -1, 1, 1, -1};
  auto chi2 = [&](const std::vector<int>& v) {
    double s = 0;
    for (int c = 0; c < 8; ++c) s += (v[c] - fit[c]) * (v[c] - fit[c]) / fit[c];
    return s;
  };
  const double observed = chi2(u);
  double total = 0, tail = 0;
  for (int x = -1000; x <= 1000; ++x) {
    std::vector<int> v(8);
    bool ok = true;
    for (int c = 0; c < 8; ++c) {
      v[c] = u[c] + sign[c] * x;
      ok = ok && v[c] >= 0;
    }
    if (!ok) continue;
    double w = 1.0;
    for (int c = 0; c < 8; ++c) w /= factorial(v[c]);
    total += w;
    if (chi2(v) >= observed - 1e-9 * std::max(1.0, observed)) tail += w;
  }
  return tail / total;
}

}  // namespace oracle
