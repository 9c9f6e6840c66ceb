#pragma once

#include <cmath>
#include <string>

#include "racsim/error.hpp"

namespace racsim {

// Integrates g over (0,1) with the tanh-sinh rule, halving the step until two
// successive levels agree to rel_tol. The callback receives both s and 1-s,
// the latter computed without cancellation, so integrable endpoint
// singularities s^-a or (1-s)^-a with a < 1 converge as well.
template <class F>
double tanh_sinh_01(F&& g, double rel_tol = 1e-10, int max_level = 12) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kUmax = 5.0;

  auto node_term = [&](double u) -> double {
    double w = 0.5 * kPi * std::sinh(u);
    double e = std::exp(-2.0 * w);
    double s = 1.0 / (1.0 + e);
    double one_minus = e / (1.0 + e);
    if (s <= 0.0 || one_minus <= 0.0) return 0.0;
    double weight = kPi * std::cosh(u) * s * one_minus;
    return weight * g(s, one_minus);
  };

  double h = 1.0;
  double sum = node_term(0.0);
  for (int k = 1; k * h <= kUmax; ++k) sum += node_term(k * h) + node_term(-k * h);
  double integral = h * sum;

  double residual = 0.0;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double u = h; u <= kUmax; u += 2.0 * h) add += node_term(u) + node_term(-u);
    sum += add;
    double cur = h * sum;
    residual = std::abs(cur - integral);
    integral = cur;
    if (level >= 3 && residual <= rel_tol * std::abs(cur)) return cur;
  }
  throw NumericError("tanh_sinh_01: quadrature did not settle; residual estimate " +
                     std::to_string(residual));
}

// Tail integral int_t^inf (1 - t/x)^(dim-1) f(x) dx through x = t/(1-s),
// which maps the range onto (0,1) and regularizes both ends:
//   = int_0^1 s^(dim-1) f(t/(1-s)) t / (1-s)^2 ds.
template <class Density>
double lambda_by_quadrature(Density&& density, double t, int dim, double rel_tol = 1e-10) {
  if (!(t > 0)) throw std::domain_error("lambda_by_quadrature: t must be > 0");
  if (dim < 2) throw std::invalid_argument("lambda_by_quadrature: dim must be >= 2");
  return tanh_sinh_01(
      [&](double s, double one_minus) {
        double x = t / one_minus;
        return std::pow(s, dim - 1) * density(x) * t / (one_minus * one_minus);
      },
      rel_tol);
}

}  // namespace racsim
