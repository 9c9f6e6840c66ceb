#pragma once

// The distribution function F = exp(-Lambda) built from a radial measure and
// a dimension, with a numeric inverse and the Williamson-type reconstruction
// of S from Lambda.

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

#include "racsim/radial.hpp"

namespace racsim {

enum class DerivativeScheme { analytic, finite_difference };

class Generator {
 public:
  Generator(std::shared_ptr<const RadialMeasure> measure, int dim)
      : measure_(std::move(measure)), dim_(dim) {
    if (!measure_) throw std::invalid_argument("Generator: null measure");
    if (dim_ < 2) throw std::invalid_argument("Generator: dim must be >= 2");
    // Write-once inversion hints: the top of the support (where F reaches 1)
    // and Lambda(0) = u_nu (where F leaves 0).
    support_sup_ = measure_->pseudo_inverse(0.0);
    lambda_at_zero_ = measure_->lambda(0.0, dim_);
  }

  int dim() const noexcept { return dim_; }
  const RadialMeasure& measure() const noexcept { return *measure_; }
  const std::shared_ptr<const RadialMeasure>& measure_ptr() const noexcept { return measure_; }

  // Lambda(t) = int_t^inf (1 - t/x)^(dim-1) nu(dx); non-increasing, -> 0.
  double exponent_lambda(double t) const { return measure_->lambda(t, dim_); }

  // F(t) = exp(-Lambda(t)); 0 where Lambda is infinite, 1 beyond the support.
  double cdf(double t) const {
    if (t < 0) throw std::domain_error("Generator::cdf: t must be >= 0");
    return std::exp(-exponent_lambda(t));
  }

  // inf{t >= 0 : F(t) >= u}. F^{-1}(0) = 0; F^{-1}(1) is the top of the
  // support, +inf when unbounded. Without a closed form this bisects Lambda
  // down to 1e-12 on the argument.
  double inverse(double u) const {
    if (!(u >= 0 && u <= 1)) throw std::invalid_argument("Generator::inverse: u must be in [0,1]");
    if (u == 0) return 0.0;
    if (u == 1) return support_sup_;
    double ell = -std::log(u);
    if (measure_->has_lambda_inverse(dim_)) return measure_->lambda_inverse(ell, dim_);
    if (lambda_at_zero_ <= ell) return 0.0;  // finite mass and u <= F(0)
    double hi = std::isinf(support_sup_) ? 1e3 : support_sup_;
    double lo = std::min(1e-3, hi * 1e-6);
    auto lam = [this](double t) { return exponent_lambda(t); };
    return numeric_pseudo_inverse_autobracket(lam, ell, lo, hi);
  }

  // S(t) rebuilt from Lambda and its derivatives:
  //   S(t) = sum_{k=0}^{d-2} (-1)^k Lambda^(k)(t) t^k / k!
  //        + (-1)^(d-1) Lambda^(d-1)_+(t) t^(d-1) / (d-1)!,
  // the last term taking the right-hand derivative. Must agree with
  // survival() at continuity points of S.
  double williamson_survival(double t, DerivativeScheme scheme) const {
    if (!(t > 0)) throw std::domain_error("Generator::williamson_survival: t must be > 0");
    double acc = 0.0;
    double sign = 1.0;
    double tpow = 1.0;
    double factorial = 1.0;
    for (int k = 0; k <= dim_ - 2; ++k) {
      acc += sign * derivative(t, k, scheme, /*right_sided=*/false) * tpow / factorial;
      sign = -sign;
      tpow *= t;
      factorial *= (k + 1);
    }
    acc += sign * derivative(t, dim_ - 1, scheme, /*right_sided=*/true) * tpow / factorial;
    return acc;
  }

 private:
  double derivative(double t, int order, DerivativeScheme scheme, bool right_sided) const {
    if (order == 0) return exponent_lambda(t);
    if (scheme == DerivativeScheme::analytic) {
      if (!measure_->has_lambda_derivatives(dim_))
        throw UnsupportedMeasureError("williamson_survival: analytic derivatives unavailable");
      return measure_->lambda_derivative(t, order, dim_);
    }
    return right_sided ? forward_difference(t, order) : central_difference(t, order);
  }

  // Relative step per difference order. 1e-5 balances truncation against
  // roundoff for first differences; higher orders divide by h^k and need a
  // larger step to stay above the cancellation floor.
  double fd_step(double t, int order) const {
    double rel = std::max(1e-5, std::pow(std::numeric_limits<double>::epsilon(),
                                         1.0 / (order + 2)));
    double h = t * rel;
    if (!(h > 0) || t + h == t) throw NumericError("williamson_survival: finite-difference step underflow");
    return h;
  }

  // order-th central difference, nodes t + (order/2 - j) h: O(h^2) accurate.
  double central_difference(double t, int order) const {
    double h = fd_step(t, order);
    double acc = 0.0;
    double coeff = 1.0;  // (-1)^j C(order, j)
    for (int j = 0; j <= order; ++j) {
      acc += coeff * exponent_lambda(t + (0.5 * order - j) * h);
      coeff *= -static_cast<double>(order - j) / (j + 1);
    }
    return acc / std::pow(h, order);
  }

  // order-th one-sided difference using nodes at and to the right of t,
  // Richardson-extrapolated to O(h^2). Honors jumps of the derivative by
  // never looking left.
  double forward_difference(double t, int order) const {
    auto fwd = [&](double h) {
      double acc = 0.0;
      double coeff = (order % 2 == 0) ? 1.0 : -1.0;  // (-1)^(order-j) C(order, j)
      for (int j = 0; j <= order; ++j) {
        acc += coeff * exponent_lambda(t + j * h);
        coeff *= -static_cast<double>(order - j) / (j + 1);
      }
      return acc / std::pow(h, order);
    };
    double h = fd_step(t, order);
    return 2.0 * fwd(0.5 * h) - fwd(h);
  }

  std::shared_ptr<const RadialMeasure> measure_;
  int dim_;
  double support_sup_;
  double lambda_at_zero_;
};

}  // namespace racsim
