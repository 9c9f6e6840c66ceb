#pragma once

// The exact sampler: grow componentwise maxima Y_i = max_k R_k Q_i^(k) over
// the decreasing point stream until the next point cannot change any
// component (R <= min_i Y_i), then map through F.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "racsim/generator.hpp"
#include "racsim/points.hpp"
#include "racsim/simplex.hpp"

namespace racsim {

// One accepted while-iteration: the point radius and its simplex weights.
struct TracePoint {
  double radius;
  std::vector<double> weights;
};

struct SampleTrace {
  std::vector<TracePoint> accepted;
  double rejected_radius = 0.0;  // first point at or below min Y; 0 if the stream ended
  bool exhausted = false;
};

// copula mode returns U = F(Y), which requires a non-finite measure; max_id
// mode returns the raw maxima and also accepts finite measures (Y may then be
// identically zero when the stream carries no points at all).
enum class SampleMode { copula, max_id };

struct SampleResult {
  std::vector<double> u;  // F applied componentwise to y
  std::vector<double> y;
  std::uint64_t loops = 0;      // accepted while-iterations; the stopping draw is not counted
  double rejected_point = 0.0;  // audit witness: min(y) >= rejected_point
};

inline SampleResult sample_one(const Generator& gen, const SimplexLaw& law, Rng& rng,
                               SampleMode mode = SampleMode::copula,
                               SampleTrace* trace = nullptr,
                               std::uint64_t iteration_cap = 1'000'000) {
  const RadialMeasure& measure = gen.measure();
  const int d = gen.dim();
  if (law.dim() != d) throw std::invalid_argument("sample_one: simplex law dimension mismatch");
  if (mode == SampleMode::copula && !std::isinf(measure.total_mass()))
    throw UnsupportedMeasureError(
        "sample_one: copula mode requires a non-finite radial measure (use max_id mode)");

  SampleResult res;
  res.y.assign(d, 0.0);
  std::vector<double> q(d);
  PointStream stream(measure, rng);
  double min_y = 0.0;
  std::optional<double> point = stream.next();
  while (point && *point > min_y) {
    if (res.loops >= iteration_cap)
      throw NumericError("sample_one: iteration cap of " + std::to_string(iteration_cap) +
                         " exceeded");
    law.sample(rng, q);
    for (int i = 0; i < d; ++i) res.y[i] = std::max(res.y[i], *point * q[i]);
    if (trace) trace->accepted.push_back({*point, q});
    min_y = *std::min_element(res.y.begin(), res.y.end());
    ++res.loops;
    point = stream.next();
  }
  res.rejected_point = point.value_or(0.0);
  if (trace) {
    trace->rejected_radius = res.rejected_point;
    trace->exhausted = !point.has_value();
  }
  res.u.resize(d);
  for (int i = 0; i < d; ++i) res.u[i] = gen.cdf(res.y[i]);
  return res;
}

struct BatchSummary {
  std::uint64_t n = 0;
  double mean_loops = 0.0;
  std::vector<std::uint64_t> loop_histogram;  // index m -> number of rows with m loops
  double seconds_per_sample = 0.0;
};

struct BatchResult {
  int dim = 0;
  std::vector<double> values;        // n x dim row-major; u or y depending on mode
  std::vector<std::uint64_t> loops;  // per row
  BatchSummary summary;
};

// n independent rows; row i always runs on base.substream(i), so the output
// matrix is identical for every parallel_streams value.
inline BatchResult sample_batch(const Generator& gen, const SimplexLaw& law, std::uint64_t n,
                                Rng base, int parallel_streams = 1,
                                SampleMode mode = SampleMode::copula,
                                std::uint64_t iteration_cap = 1'000'000) {
  if (n < 1) throw std::invalid_argument("sample_batch: n must be >= 1");
  if (parallel_streams < 1) throw std::invalid_argument("sample_batch: parallel_streams must be >= 1");
  const int d = gen.dim();

  auto t0 = std::chrono::steady_clock::now();
  BatchResult out;
  out.dim = d;
  out.values.assign(n * static_cast<std::uint64_t>(d), 0.0);
  out.loops.assign(n, 0);

  std::mutex error_mutex;
  std::uint64_t first_error = n;
  std::string error_message;

  auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      try {
        Rng row_rng = base.substream(i);
        SampleResult r = sample_one(gen, law, row_rng, mode, nullptr, iteration_cap);
        const std::vector<double>& src = (mode == SampleMode::copula) ? r.u : r.y;
        std::copy(src.begin(), src.end(), out.values.begin() + i * d);
        out.loops[i] = r.loops;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < first_error) {
          first_error = i;
          error_message = e.what();
        }
        return;
      }
    }
  };

  if (parallel_streams == 1 || n == 1) {
    worker(0, n);
  } else {
    std::uint64_t streams = std::min<std::uint64_t>(parallel_streams, n);
    std::vector<std::thread> pool;
    pool.reserve(streams);
    for (std::uint64_t s = 0; s < streams; ++s) {
      std::uint64_t begin = n * s / streams;
      std::uint64_t end = n * (s + 1) / streams;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  if (first_error < n)
    throw PartialResultError("sample_batch: row " + std::to_string(first_error) + ": " +
                                 error_message,
                             first_error);

  auto t1 = std::chrono::steady_clock::now();
  out.summary.n = n;
  std::uint64_t max_loops = 0;
  double mean = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    max_loops = std::max(max_loops, out.loops[i]);
    mean += static_cast<double>(out.loops[i]);
  }
  out.summary.mean_loops = mean / static_cast<double>(n);
  out.summary.loop_histogram.assign(max_loops + 1, 0);
  for (std::uint64_t i = 0; i < n; ++i) ++out.summary.loop_histogram[out.loops[i]];
  out.summary.seconds_per_sample =
      std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(n);
  return out;
}

// Closed-form E[M] for the theta = 1 power-law benchmark:
//   dim * sum_{i=1}^{dim} C(dim, i) (-1)^(i+1) / H_i,
// H_i the harmonic numbers; lies in [dim, dim^2].
inline double expected_loops_galambos_theta1(int dim) {
  if (dim < 1) throw std::invalid_argument("expected_loops_galambos_theta1: dim must be >= 1");
  double sum = 0.0;
  double binom = 1.0;
  double harmonic = 0.0;
  for (int i = 1; i <= dim; ++i) {
    binom *= static_cast<double>(dim - i + 1) / i;
    harmonic += 1.0 / i;
    sum += ((i % 2 == 1) ? 1.0 : -1.0) * binom / harmonic;
  }
  return dim * sum;
}

}  // namespace racsim
