#pragma once

// Analytic evaluation of the copula C_F and of the max-id distribution
// function; the ground truth the sampler is validated against.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "racsim/generator.hpp"
#include "racsim/rng.hpp"
#include "racsim/simplex.hpp"

namespace racsim {

namespace detail {
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}
}  // namespace detail

class CopulaSpec {
 public:
  explicit CopulaSpec(Generator gen) : gen_(std::move(gen)) {
    if (!std::isinf(gen_.measure().total_mass()))
      throw UnsupportedMeasureError("CopulaSpec: a proper copula needs a non-finite radial measure");
  }

  const Generator& generator() const noexcept { return gen_; }
  int dim() const noexcept { return gen_.dim(); }

  // Inclusion-exclusion in log space over the non-empty coordinate subsets:
  //   log C(u) = sum_A (-1)^|A| Lambda(sum_{k in A} F^{-1}(u_k)).
  // Coordinates with u_k = 1 drop out before enumeration; any u_k = 0 grounds
  // the value at 0. Subsets walk in Gray-code order so each step updates the
  // running argument by a single add or subtract, and the 2^d - 1 terms are
  // pairwise-summed.
  double cdf(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != gen_.dim())
      throw std::invalid_argument("CopulaSpec::cdf: wrong dimension");
    std::vector<double> x;
    x.reserve(u.size());
    for (double uk : u) {
      if (!(uk >= 0 && uk <= 1)) throw std::invalid_argument("CopulaSpec::cdf: u outside [0,1]");
      if (uk == 0) return 0.0;
      if (uk < 1) x.push_back(gen_.inverse(uk));  // F^-1 computed once per coordinate
    }
    if (x.empty()) return 1.0;
    int d = static_cast<int>(x.size());
    if (d > 20)
      throw CapacityError(
          "CopulaSpec::cdf: exact subset enumeration infeasible beyond d = 20; "
          "use the Monte Carlo evaluator");
    std::uint32_t count = (1u << d) - 1;
    std::vector<double> terms(count);
    double running = 0.0;
    std::uint32_t prev = 0;
    for (std::uint32_t i = 1; i <= count; ++i) {
      std::uint32_t gray = i ^ (i >> 1);
      std::uint32_t flipped = gray ^ prev;
      int j = std::countr_zero(flipped);
      running += (gray & flipped) ? x[j] : -x[j];
      prev = gray;
      double lam = gen_.exponent_lambda(running);
      terms[i - 1] = (std::popcount(gray) & 1) ? -lam : lam;
    }
    double log_c = detail::pairwise_sum(terms);
    return std::min(1.0, std::exp(log_c));
  }

 private:
  Generator gen_;
};

struct MaxIdEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool underflow = false;  // S overflowed at a tiny argument; value pinned to 0
};

// P(Y <= y) = exp(-E[S(min_i y_i / Q_i)]), estimated over n_mc simplex draws
// with a delta-method standard error for the outer exponential.
inline MaxIdEstimate maxid_cdf_monte_carlo(const RadialMeasure& m, const SimplexLaw& law,
                                           std::span<const double> y, std::uint64_t n_mc,
                                           Rng& rng) {
  if (y.size() != static_cast<std::size_t>(law.dim()))
    throw std::invalid_argument("maxid_cdf_monte_carlo: y dimension mismatch");
  for (double yi : y)
    if (!(yi > 0)) throw std::invalid_argument("maxid_cdf_monte_carlo: y must be positive");
  if (n_mc < 1) throw std::invalid_argument("maxid_cdf_monte_carlo: n_mc must be >= 1");

  std::vector<double> q(law.dim());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t k = 0; k < n_mc; ++k) {
    law.sample(rng, q);
    double arg = kInf;
    for (std::size_t i = 0; i < y.size(); ++i) arg = std::min(arg, y[i] / q[i]);
    double s = m.survival(arg);
    double delta = s - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (s - mean);
  }
  if (!std::isfinite(mean)) return {0.0, 0.0, true};
  double variance = n_mc > 1 ? m2 / static_cast<double>(n_mc - 1) : 0.0;
  double value = std::exp(-mean);
  double std_error = value * std::sqrt(variance / static_cast<double>(n_mc));
  return {value, std_error, false};
}

}  // namespace racsim
