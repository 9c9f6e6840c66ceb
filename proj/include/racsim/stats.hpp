#pragma once

// Goodness-of-fit machinery for the validation harness: KS statistics,
// Kolmogorov and chi-square tail probabilities, Poisson pmf.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "racsim/error.hpp"

namespace racsim {

// One-sample KS distance to the uniform CDF on [0,1], by order statistics.
inline double ks_uniform(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_uniform: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("ks_uniform: value outside [0,1]");
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    d = std::max(d, (i + 1) / n - sorted[i]);
    d = std::max(d, sorted[i] - i / n);
  }
  return d;
}

// Kolmogorov tail Q(lambda) = 2 sum_j (-1)^(j-1) exp(-2 j^2 lambda^2).
inline double kolmogorov_tail(double lambda) {
  if (lambda <= 0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-14) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

struct TwoSampleKs {
  double statistic = 0.0;
  double p_value = 0.0;
};

// Smirnov two-sample statistic with the asymptotic p-value.
inline TwoSampleKs ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  double ne = na * nb / (na + nb);
  double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  return {d, kolmogorov_tail(lambda)};
}

// Regularized upper incomplete gamma Q(a, x): series for x < a + 1, Lentz
// continued fraction otherwise.
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0) || x < 0) throw std::invalid_argument("regularized_gamma_q: bad arguments");
  if (x == 0) return 1.0;
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return std::clamp(1.0 - p, 0.0, 1.0);
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int n = 1; n < 500; ++n) {
    double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::clamp(std::exp(-x + a * std::log(x) - std::lgamma(a)) * h, 0.0, 1.0);
}

inline double chi_square_tail(double chi2, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_tail: dof must be >= 1");
  return regularized_gamma_q(dof / 2.0, chi2 / 2.0);
}

inline double poisson_pmf(int k, double mean) {
  if (k < 0) throw std::invalid_argument("poisson_pmf: k must be >= 0");
  if (!(mean > 0)) throw std::invalid_argument("poisson_pmf: mean must be > 0");
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

struct ChiSquareFit {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

// Chi-square goodness of fit of a count histogram against Poisson(mean);
// value_counts[k] holds how many observations equal k. The upper tail is
// lumped so every expected bin stays at or above 5.
inline ChiSquareFit chi_square_poisson_fit(std::span<const std::uint64_t> value_counts,
                                           double mean) {
  if (value_counts.empty()) throw std::invalid_argument("chi_square_poisson_fit: empty histogram");
  double n = 0.0;
  for (std::uint64_t c : value_counts) n += static_cast<double>(c);
  if (n < 1) throw std::invalid_argument("chi_square_poisson_fit: no observations");

  double chi2 = 0.0;
  int bins = 0;
  double expected_used = 0.0;
  std::uint64_t observed_used = 0;
  int k = 0;
  for (; k < static_cast<int>(value_counts.size()); ++k) {
    double expected = n * poisson_pmf(k, mean);
    if (expected < 5.0) break;
    double diff = static_cast<double>(value_counts[k]) - expected;
    chi2 += diff * diff / expected;
    expected_used += expected;
    observed_used += value_counts[k];
    ++bins;
  }
  double tail_expected = n - expected_used;
  std::uint64_t tail_observed = 0;
  for (int r = k; r < static_cast<int>(value_counts.size()); ++r) tail_observed += value_counts[r];
  if (tail_expected >= 5.0) {
    double diff = static_cast<double>(tail_observed) - tail_expected;
    chi2 += diff * diff / tail_expected;
    ++bins;
  }
  if (bins < 2) throw std::invalid_argument("chi_square_poisson_fit: too few usable bins");
  int dof = bins - 1;
  return {chi2, dof, chi_square_tail(chi2, dof)};
}

}  // namespace racsim
