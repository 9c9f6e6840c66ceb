#pragma once

// Radial measures: a Radon measure nu on (0, inf] with nu({inf}) = 0, seen
// through its survival function S(t) = nu((t, inf]) and the pseudo-inverse
// S^{-1}(y) = inf{x > 0 : S(x) <= y}. Both are non-increasing and
// right-continuous, tied together by the Galois property
//   y < S(x)  <=>  S^{-1}(y) > x.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "racsim/error.hpp"
#include "racsim/quadrature.hpp"

namespace racsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Generic monotone inversion: inf{x > 0 : S(x) <= y} for a non-increasing,
// right-continuous S. The bracket must satisfy S(lo) > y >= S(hi); if
// S(lo) <= y already, lo is returned (the inf point lies at or below it).
// Bisection keeps the upper end on the {S <= y} side, so the result converges
// to the inf point even across a jump of S.
template <class Survival>
double numeric_pseudo_inverse(Survival&& s, double y, double lo, double hi,
                              double tol = 1e-12, int max_iter = 200) {
  if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("numeric_pseudo_inverse: bad bracket");
  double s_lo = s(lo);
  double s_hi = s(hi);
  if (y < s_hi) throw BracketError("numeric_pseudo_inverse: y below S(hi); expand the bracket up");
  if (y > s_lo) throw BracketError("numeric_pseudo_inverse: y above S(lo); expand the bracket down");
  if (s_lo <= y) return lo;
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (s(mid) <= y) hi = mid; else lo = mid;
  }
  return hi;
}

// Same inversion with geometric bracket growth: x10 per side, at most 40
// steps each, before giving up with a BracketError.
template <class Survival>
double numeric_pseudo_inverse_autobracket(Survival&& s, double y, double lo = 1e-3,
                                          double hi = 1e3, double tol = 1e-12) {
  for (int i = 0; i < 40 && s(lo) <= y; ++i) lo *= 0.1;
  if (s(lo) <= y) return lo;  // y at or above the total mass: the inf point is 0
  for (int i = 0; i < 40 && s(hi) > y; ++i) hi *= 10.0;
  if (s(hi) > y) throw BracketError("numeric_pseudo_inverse: could not bracket y after 40 expansions");
  return numeric_pseudo_inverse(s, y, lo, hi, tol);
}

// Contract shared by every radial family. Implementations are immutable after
// construction and safe to share across threads.
class RadialMeasure {
 public:
  virtual ~RadialMeasure() = default;

  // S(t) = nu((t, inf]). Throws std::domain_error for t <= 0 (S may be
  // infinite at 0 for a non-finite measure).
  virtual double survival(double t) const = 0;

  // inf{x > 0 : S(x) <= y}. Throws std::out_of_range for y > total_mass(),
  // which signals point-stream exhaustion in the finite-mass case.
  virtual double pseudo_inverse(double y) const = 0;

  // u_nu = nu((0, inf]); +inf for non-finite measures.
  virtual double total_mass() const = 0;

  virtual bool has_density() const { return false; }
  virtual double density(double /*x*/) const {
    throw UnsupportedMeasureError("measure has no density");
  }

  // Exponent Lambda(t) = int_t^inf (1 - t/x)^(dim-1) nu(dx) of the generator
  // built on this measure; Lambda(0) = u_nu. Families with closed forms
  // override; the default integrates the density.
  virtual double lambda(double t, int dim) const {
    if (dim < 2) throw std::invalid_argument("lambda: dim must be >= 2");
    if (t < 0) throw std::domain_error("lambda: t must be >= 0");
    if (t == 0) return total_mass();
    if (!has_density())
      throw UnsupportedMeasureError("lambda: no closed form and no density to integrate");
    return lambda_by_quadrature([this](double x) { return density(x); }, t, dim);
  }

  virtual bool has_lambda_inverse(int /*dim*/) const { return false; }
  virtual double lambda_inverse(double /*ell*/, int /*dim*/) const {
    throw UnsupportedMeasureError("measure has no closed-form exponent inverse");
  }

  virtual bool has_lambda_derivatives(int /*dim*/) const { return false; }
  // order-th derivative of Lambda(., dim); the right-hand limit at kinks.
  virtual double lambda_derivative(double /*t*/, int /*order*/, int /*dim*/) const {
    throw UnsupportedMeasureError("measure has no closed-form exponent derivatives");
  }
};

// Power-law family: density Gamma(dim + 1/theta) / (Gamma(dim) Gamma(1/theta))
// x^(-1/theta - 1) dx. Normalized so that S^{-1}(y) = c_theta y^(-theta) and
// the exponent collapses to Lambda(t) = t^(-1/theta) at the native dimension.
class GalambosRadial final : public RadialMeasure {
 public:
  GalambosRadial(double theta, int dim) : theta_(theta), dim_(dim) {
    if (!(theta > 0)) throw std::invalid_argument("GalambosRadial: theta must be > 0");
    if (dim < 2) throw std::invalid_argument("GalambosRadial: dim must be >= 2");
    // Log-gamma throughout: the individual Gamma values overflow long before
    // their ratio does.
    log_scale_ = std::lgamma(dim + 1.0 / theta) + std::log(theta) -
                 std::lgamma(static_cast<double>(dim)) - std::lgamma(1.0 / theta);
    scale_ = std::exp(log_scale_);            // S(t) = scale * t^(-1/theta)
    c_theta_ = std::exp(theta * log_scale_);  // S^{-1}(y) = c_theta * y^(-theta)
  }

  double theta() const noexcept { return theta_; }
  int dim() const noexcept { return dim_; }
  double constant() const noexcept { return c_theta_; }

  double survival(double t) const override {
    if (!(t > 0)) throw std::domain_error("GalambosRadial::survival: t must be > 0");
    return scale_ * std::pow(t, -1.0 / theta_);
  }

  double pseudo_inverse(double y) const override {
    if (y < 0) throw std::invalid_argument("GalambosRadial::pseudo_inverse: y must be >= 0");
    if (y == 0) return kInf;
    return c_theta_ * std::pow(y, -theta_);
  }

  double total_mass() const override { return kInf; }

  bool has_density() const override { return true; }
  double density(double x) const override {
    if (!(x > 0)) throw std::domain_error("GalambosRadial::density: x must be > 0");
    return scale_ / theta_ * std::pow(x, -1.0 / theta_ - 1.0);
  }

  double lambda(double t, int dim) const override {
    if (dim != dim_) return RadialMeasure::lambda(t, dim);
    if (t < 0) throw std::domain_error("GalambosRadial::lambda: t must be >= 0");
    if (t == 0) return kInf;
    return std::pow(t, -1.0 / theta_);
  }

  bool has_lambda_inverse(int dim) const override { return dim == dim_; }
  double lambda_inverse(double ell, int dim) const override {
    if (dim != dim_) return RadialMeasure::lambda_inverse(ell, dim);
    if (ell < 0) throw std::invalid_argument("GalambosRadial::lambda_inverse: ell must be >= 0");
    if (ell == 0) return kInf;
    return std::pow(ell, -theta_);
  }

  bool has_lambda_derivatives(int dim) const override { return dim == dim_; }
  double lambda_derivative(double t, int order, int dim) const override {
    if (dim != dim_) return RadialMeasure::lambda_derivative(t, order, dim);
    if (!(t > 0)) throw std::domain_error("GalambosRadial::lambda_derivative: t must be > 0");
    double a = -1.0 / theta_;
    double coeff = 1.0;
    for (int j = 0; j < order; ++j) coeff *= (a - j);
    return coeff * std::pow(t, a - order);
  }

 private:
  double theta_;
  int dim_;
  double log_scale_;
  double scale_;
  double c_theta_;
};

// c_theta = (Gamma(dim) Gamma(1/theta) / (Gamma(dim + 1/theta) theta))^(-theta);
// equals dim for theta = 1.
inline double galambos_constant(double theta, int dim) {
  if (!(theta > 0)) throw std::invalid_argument("galambos_constant: theta must be > 0");
  if (dim < 2) throw std::invalid_argument("galambos_constant: dim must be >= 2");
  double log_scale = std::lgamma(dim + 1.0 / theta) + std::log(theta) -
                     std::lgamma(static_cast<double>(dim)) - std::lgamma(1.0 / theta);
  return std::exp(theta * log_scale);
}

// nu = sum_k b_k delta_{a_k} with a_1 > a_2 > ... > 0. S and S^{-1} are the
// right-continuous staircases over atoms and cumulative weights:
//   S(t) = sum_{k : a_k > t} b_k,
//   S^{-1}(y) = a_k  for  y in [b_1 + ... + b_{k-1}, b_1 + ... + b_k).
class DiscreteRadial final : public RadialMeasure {
 public:
  DiscreteRadial(std::vector<double> atoms, std::vector<double> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty()) throw std::invalid_argument("DiscreteRadial: no atoms");
    if (atoms_.size() != weights_.size())
      throw std::invalid_argument("DiscreteRadial: atoms/weights size mismatch");
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!(atoms_[i] > 0)) throw std::invalid_argument("DiscreteRadial: atoms must be positive");
      if (i > 0 && !(atoms_[i] < atoms_[i - 1]))
        throw std::invalid_argument("DiscreteRadial: atoms must be strictly decreasing");
      if (!(weights_[i] >= 0)) throw std::invalid_argument("DiscreteRadial: weights must be >= 0");
    }
    cumulative_.resize(weights_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      run += weights_[i];
      cumulative_[i] = run;
    }
  }

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double survival(double t) const override {
    if (!(t > 0)) throw std::domain_error("DiscreteRadial::survival: t must be > 0");
    std::size_t count = count_above(t);
    return count == 0 ? 0.0 : cumulative_[count - 1];
  }

  double pseudo_inverse(double y) const override {
    if (y < 0) throw std::invalid_argument("DiscreteRadial::pseudo_inverse: y must be >= 0");
    if (y > cumulative_.back())
      throw std::out_of_range("DiscreteRadial::pseudo_inverse: y exceeds total mass");
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), y);
    if (it == cumulative_.end()) return 0.0;  // y == total mass: S <= y everywhere
    return atoms_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

  double total_mass() const override { return cumulative_.back(); }

  double lambda(double t, int dim) const override {
    if (dim < 2) throw std::invalid_argument("DiscreteRadial::lambda: dim must be >= 2");
    if (t < 0) throw std::domain_error("DiscreteRadial::lambda: t must be >= 0");
    std::size_t count = t == 0 ? atoms_.size() : count_above(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      acc += weights_[i] * std::pow(1.0 - t / atoms_[i], dim - 1);
    return acc;
  }

  bool has_lambda_derivatives(int /*dim*/) const override { return true; }
  double lambda_derivative(double t, int order, int dim) const override {
    if (order == 0) return lambda(t, dim);
    if (!(t > 0)) throw std::domain_error("DiscreteRadial::lambda_derivative: t must be > 0");
    if (order > dim - 1) return 0.0;
    double falling = 1.0;
    for (int j = 1; j <= order; ++j) falling *= (dim - j);
    std::size_t count = count_above(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      acc += weights_[i] * falling * std::pow(-1.0 / atoms_[i], order) *
             std::pow(1.0 - t / atoms_[i], dim - 1 - order);
    return acc;
  }

 private:
  std::size_t count_above(double t) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t, std::greater<double>());
    return static_cast<std::size_t>(it - atoms_.begin());
  }

  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

// Atoms 1/k with equal weight theta, k = 1, 2, ...; the staircase formulas
// collapse to O(1) closed forms. S uses the right-limit version, so at the
// atoms themselves S(1/k) counts only atoms strictly above 1/k.
class HarmonicRadial final : public RadialMeasure {
 public:
  explicit HarmonicRadial(double theta) : theta_(theta) {
    if (!(theta > 0)) throw std::invalid_argument("HarmonicRadial: theta must be > 0");
  }

  double theta() const noexcept { return theta_; }

  double survival(double t) const override {
    if (!(t > 0)) throw std::domain_error("HarmonicRadial::survival: t must be > 0");
    return theta_ * std::max(std::ceil(1.0 / t) - 1.0, 0.0);
  }

  double pseudo_inverse(double y) const override {
    if (y < 0) throw std::invalid_argument("HarmonicRadial::pseudo_inverse: y must be >= 0");
    // ceil(y/theta) = 0 only at y = 0, where the inf point is the top atom 1.
    return 1.0 / std::max(std::ceil(y / theta_), 1.0);
  }

  double total_mass() const override { return kInf; }

  // Lambda(t) = theta * sum_{k=1}^{floor(1/t)} (1 - k t)^(dim-1), evaluated
  // through binomial expansion and closed-form power sums for dim <= 7 so the
  // cost stays O(dim) regardless of how many atoms exceed t.
  double lambda(double t, int dim) const override {
    if (dim < 2) throw std::invalid_argument("HarmonicRadial::lambda: dim must be >= 2");
    if (t < 0) throw std::domain_error("HarmonicRadial::lambda: t must be >= 0");
    if (t == 0) return kInf;
    if (t >= 1) return 0.0;
    double m = std::floor(1.0 / t);
    int p = dim - 1;
    if (m > 1e12) {
      // The power sums would overflow; by here F = exp(-Lambda) is 0 anyway,
      // so a lower bound on Lambda is as good as the exact value.
      double lower = theta_ * 0.5 * m * std::pow(0.5, p);
      if (lower > 750.0) return lower;
      throw NumericError("HarmonicRadial::lambda: argument too small for the closed-form sums");
    }
    if (p <= 6) {
      double acc = 0.0;
      double coeff = 1.0;  // C(p, j) (-1)^j
      double tpow = 1.0;
      for (int j = 0; j <= p; ++j) {
        acc += coeff * tpow * power_sum(j, m);
        coeff *= -static_cast<double>(p - j) / (j + 1);
        tpow *= t;
      }
      return theta_ * acc;
    }
    if (m > 1e8) throw NumericError("HarmonicRadial::lambda: too many terms at this dimension");
    double acc = 0.0;
    for (long long k = 1; k <= static_cast<long long>(m); ++k)
      acc += std::pow(std::max(1.0 - k * t, 0.0), p);
    return theta_ * acc;
  }

  bool has_lambda_derivatives(int /*dim*/) const override { return true; }
  double lambda_derivative(double t, int order, int dim) const override {
    if (order == 0) return lambda(t, dim);
    if (!(t > 0)) throw std::domain_error("HarmonicRadial::lambda_derivative: t must be > 0");
    if (order > dim - 1) return 0.0;
    if (t >= 1) return 0.0;
    double m = std::floor(1.0 / t);
    if (m > 1e6) throw NumericError("HarmonicRadial::lambda_derivative: too many terms");
    double falling = 1.0;
    for (int j = 1; j <= order; ++j) falling *= (dim - j);
    double acc = 0.0;
    for (long long k = 1; k <= static_cast<long long>(m); ++k)
      acc += std::pow(-static_cast<double>(k), order) *
             std::pow(std::max(1.0 - k * t, 0.0), dim - 1 - order);
    return theta_ * falling * acc;
  }

 private:
  static double power_sum(int j, double m) {
    switch (j) {
      case 0: return m;
      case 1: return m * (m + 1) / 2.0;
      case 2: return m * (m + 1) * (2 * m + 1) / 6.0;
      case 3: { double p1 = m * (m + 1) / 2.0; return p1 * p1; }
      case 4: return (((6 * m + 15) * m + 10) * m * m * m - m) / 30.0;
      case 5: { double m2 = m * m; return ((2 * m2 + 6 * m + 5) * m2 * m2 - m2) / 12.0; }
      case 6: { double m2 = m * m; double m3 = m2 * m;
                return ((6 * m2 + 21 * m + 21) * m2 * m3 - 7 * m3 + m) / 42.0; }
      default: throw std::invalid_argument("power_sum: order out of range");
    }
  }

  double theta_;
};

// x * nu for x > 0. Scaling the radial measure raises the associated max-id
// distribution function to the power x.
class ScaledRadial final : public RadialMeasure {
 public:
  ScaledRadial(std::shared_ptr<const RadialMeasure> base, double factor)
      : base_(std::move(base)), factor_(factor) {
    if (!base_) throw std::invalid_argument("ScaledRadial: null base measure");
    if (!(factor > 0)) throw std::invalid_argument("ScaledRadial: factor must be > 0");
  }

  double survival(double t) const override { return factor_ * base_->survival(t); }
  double pseudo_inverse(double y) const override {
    if (y < 0) throw std::invalid_argument("ScaledRadial::pseudo_inverse: y must be >= 0");
    return base_->pseudo_inverse(y / factor_);
  }
  double total_mass() const override { return factor_ * base_->total_mass(); }
  bool has_density() const override { return base_->has_density(); }
  double density(double x) const override { return factor_ * base_->density(x); }
  double lambda(double t, int dim) const override { return factor_ * base_->lambda(t, dim); }
  bool has_lambda_inverse(int dim) const override { return base_->has_lambda_inverse(dim); }
  double lambda_inverse(double ell, int dim) const override {
    return base_->lambda_inverse(ell / factor_, dim);
  }
  bool has_lambda_derivatives(int dim) const override { return base_->has_lambda_derivatives(dim); }
  double lambda_derivative(double t, int order, int dim) const override {
    return factor_ * base_->lambda_derivative(t, order, dim);
  }

 private:
  std::shared_ptr<const RadialMeasure> base_;
  double factor_;
};

// Discretizes a continuous S on a decreasing grid t_1 > ... > t_m: one atom
// per grid point carrying S(t_j) - S(t_{j-1}). The approximating survival
// function then equals S just below every grid point, lies at or below S in
// between, and its pseudo-inverse lands exactly on grid values. Mass below
// t_m is dropped. A DiscreteRadial input is returned unchanged.
inline DiscreteRadial approximate_piecewise_constant(const RadialMeasure& m,
                                                     std::span<const double> grid) {
  if (auto* disc = dynamic_cast<const DiscreteRadial*>(&m)) return *disc;
  if (grid.empty()) throw std::invalid_argument("approximate_piecewise_constant: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0))
      throw std::invalid_argument("approximate_piecewise_constant: grid must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1]))
      throw std::invalid_argument("approximate_piecewise_constant: grid must be strictly decreasing");
  }
  std::vector<double> weights(grid.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = m.survival(grid[i]);
    weights[i] = std::max(s - prev, 0.0);
    prev = s;
  }
  return DiscreteRadial(std::vector<double>(grid.begin(), grid.end()), std::move(weights));
}

// Ranks the expected sampler loop count against the theta = 1 power-law
// benchmark: f(x) x <= S(x) everywhere means x -> S^{-1}(x) x is decreasing,
// i.e. fewer expected loops (heavier tail); the reverse inequality means more.
enum class TailClass { heavier_than_benchmark, lighter_than_benchmark, indeterminate };

inline TailClass runtime_tail_classification(const RadialMeasure& m,
                                             std::span<const double> probes) {
  if (probes.empty())
    throw std::invalid_argument("runtime_tail_classification: probes must be non-empty");
  if (!m.has_density())
    throw UnsupportedMeasureError("runtime_tail_classification: measure has no density");
  bool all_le = true;
  bool all_ge = true;
  for (double x : probes) {
    if (!(x > 0)) throw std::invalid_argument("runtime_tail_classification: probes must be > 0");
    double lhs = m.density(x) * x;
    double rhs = m.survival(x);
    double tol = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    if (lhs > rhs + tol) all_le = false;
    if (lhs < rhs - tol) all_ge = false;
  }
  if (all_le && all_ge) return TailClass::indeterminate;  // benchmark boundary
  if (all_le) return TailClass::heavier_than_benchmark;
  if (all_ge) return TailClass::lighter_than_benchmark;
  return TailClass::indeterminate;
}

}  // namespace racsim
