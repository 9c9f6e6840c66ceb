#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "racsim/radial.hpp"
#include "racsim/rng.hpp"

namespace racsim {

// Unit-exponential inverse transform. Takes u in [0,1); the 1-u form keeps
// log away from 0 when a generator can emit exactly 0.
inline double exponential_from_uniform(double u) { return -std::log1p(-u); }

inline double exponential_draw(Rng& rng) { return exponential_from_uniform(rng.uniform01()); }

// The non-increasing point sequence R_k = S^{-1}(e_1 + ... + e_k) driven by
// iid unit exponentials. For a finite measure the stream ends once the
// exponential clock passes the total mass, and the emitted count is then
// Poisson(u_nu) distributed; for non-finite measures it never ends and the
// points decrease to 0.
class PointStream {
 public:
  PointStream(const RadialMeasure& measure, Rng& rng)
      : measure_(&measure), rng_(&rng), total_(measure.total_mass()) {}

  // Next point, or nullopt once the stream is exhausted (finite mass only).
  // Emitted values never increase.
  std::optional<double> next() {
    cumulative_ += exponential_draw(*rng_);
    if (cumulative_ > total_) return std::nullopt;
    ++count_;
    return measure_->pseudo_inverse(cumulative_);
  }

  double cumulative_time() const noexcept { return cumulative_; }
  std::uint64_t emitted_count() const noexcept { return count_; }

 private:
  const RadialMeasure* measure_;
  Rng* rng_;
  double total_;
  double cumulative_ = 0.0;
  std::uint64_t count_ = 0;
};

}  // namespace racsim
