#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "racsim/error.hpp"
#include "racsim/points.hpp"
#include "racsim/rng.hpp"

namespace racsim {

// Standard normal via Box-Muller; two uniforms per draw, no cached second
// value, so the stream position stays a pure function of the draw count.
inline double normal_draw(Rng& rng) {
  double u1 = rng.uniform01();
  double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Gamma(alpha, 1) by the Marsaglia-Tsang squeeze for alpha >= 1, boosted
// through Gamma(alpha + 1) U^(1/alpha) for alpha < 1. Exact for every
// alpha > 0 and deterministic given the stream.
inline double gamma_draw(Rng& rng, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("gamma_draw: alpha must be > 0");
  if (alpha < 1.0) {
    double boost = std::pow(rng.uniform01(), 1.0 / alpha);
    return gamma_draw(rng, alpha + 1.0) * boost;
  }
  double d = alpha - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal_draw(rng);
    double v = 1.0 + c * x;
    if (v <= 0) continue;
    v = v * v * v;
    double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Law of the spread vector Q on the unit simplex: uniform (normalized unit
// exponentials) or Dirichlet(alpha) (normalized Gammas, reducing to uniform
// when every alpha is 1).
class SimplexLaw {
 public:
  static SimplexLaw uniform(int dim) {
    if (dim < 2) throw std::invalid_argument("SimplexLaw: dim must be >= 2");
    SimplexLaw law;
    law.dim_ = dim;
    return law;
  }

  static SimplexLaw dirichlet(std::vector<double> alpha) {
    if (alpha.size() < 2) throw std::invalid_argument("SimplexLaw: dim must be >= 2");
    for (double a : alpha)
      if (!(a > 0)) throw std::invalid_argument("SimplexLaw: alpha entries must be > 0");
    SimplexLaw law;
    law.dim_ = static_cast<int>(alpha.size());
    law.alpha_ = std::move(alpha);
    return law;
  }

  int dim() const noexcept { return dim_; }
  bool is_uniform() const noexcept { return alpha_.empty(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }

  void sample(Rng& rng, std::span<double> out) const {
    if (static_cast<int>(out.size()) != dim_)
      throw std::invalid_argument("SimplexLaw::sample: output size mismatch");
    double sum = 0.0;
    if (is_uniform()) {
      for (double& v : out) {
        v = exponential_draw(rng);
        sum += v;
      }
    } else {
      for (int i = 0; i < dim_; ++i) {
        out[i] = alpha_[i] == 1.0 ? exponential_draw(rng) : gamma_draw(rng, alpha_[i]);
        sum += out[i];
      }
    }
    for (double& v : out) v /= sum;
  }

  std::vector<double> sample(Rng& rng) const {
    std::vector<double> q(dim_);
    sample(rng, q);
    return q;
  }

 private:
  int dim_ = 0;
  std::vector<double> alpha_;
};

}  // namespace racsim
