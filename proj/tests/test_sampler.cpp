#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "racsim/sampler.hpp"

using Catch::Approx;
using namespace racsim;

TEST_CASE("at least one accepted iteration, deterministic replay") {
  Generator gen(std::make_shared<GalambosRadial>(1.0, 2), 2);
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng base(64);
  for (int i = 0; i < 500; ++i) {
    Rng a = base.substream(i);
    Rng b = base.substream(i);
    SampleResult ra = sample_one(gen, law, a);
    SampleResult rb = sample_one(gen, law, b);
    REQUIRE(ra.loops >= 1);
    REQUIRE(ra.u == rb.u);
    REQUIRE(ra.y == rb.y);
    REQUIRE(ra.loops == rb.loops);
    REQUIRE(ra.rejected_point == rb.rejected_point);
    for (int j = 0; j < 2; ++j) {
      REQUIRE(ra.u[j] >= 0.0);
      REQUIRE(ra.u[j] <= 1.0);
      REQUIRE(ra.u[j] == gen.cdf(ra.y[j]));
    }
  }
}

TEST_CASE("trace invariants: stopping rule and dominance") {
  std::vector<std::shared_ptr<const RadialMeasure>> measures = {
      std::make_shared<GalambosRadial>(1.0, 2),
      std::make_shared<HarmonicRadial>(0.5),
  };
  for (const auto& m : measures) {
    Generator gen(m, 2);
    SimplexLaw law = SimplexLaw::uniform(2);
    Rng base(65);
    for (int i = 0; i < 300; ++i) {
      Rng rng = base.substream(i);
      SampleTrace trace;
      SampleResult res = sample_one(gen, law, rng, SampleMode::copula, &trace);
      REQUIRE(trace.accepted.size() == res.loops);
      REQUIRE_FALSE(trace.exhausted);

      std::vector<double> y(2, 0.0);
      double prev_radius = kInf;
      for (const TracePoint& p : trace.accepted) {
        // Accepted points exceeded the then-current minimum.
        REQUIRE(p.radius > *std::min_element(y.begin(), y.end()));
        // The stream never increases, and no component of R q can exceed R.
        REQUIRE(p.radius <= prev_radius);
        for (int j = 0; j < 2; ++j) {
          REQUIRE(p.radius * p.weights[j] <= p.radius);
          y[j] = std::max(y[j], p.radius * p.weights[j]);
        }
        prev_radius = p.radius;
      }
      REQUIRE(y == res.y);
      // The terminating draw sits at or below every component.
      REQUIRE(trace.rejected_radius <= *std::min_element(y.begin(), y.end()));
      REQUIRE(trace.rejected_radius == res.rejected_point);
      REQUIRE(trace.rejected_radius <= prev_radius);
    }
  }
}

TEST_CASE("closed-form expected loop count") {
  REQUIRE(expected_loops_galambos_theta1(2) == Approx(8.0 / 3.0).epsilon(1e-12));
  REQUIRE(expected_loops_galambos_theta1(1) == Approx(1.0).epsilon(1e-12));
  for (int d = 2; d <= 20; ++d) {
    double v = expected_loops_galambos_theta1(d);
    REQUIRE(v >= d - 1e-9);
    REQUIRE(v <= static_cast<double>(d) * d + 1e-9);
  }
}

TEST_CASE("empirical loop count matches the benchmark formula") {
  Generator gen(std::make_shared<GalambosRadial>(1.0, 2), 2);
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng base(66);
  constexpr int n = 100'000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng rng = base.substream(i);
    mean += static_cast<double>(sample_one(gen, law, rng).loops);
  }
  mean /= n;
  double ref = 8.0 / 3.0;
  REQUIRE(std::abs(mean - ref) < 0.03 * ref);
}

TEST_CASE("finite measures: copula mode refuses, max-id mode allows empty streams") {
  auto finite = std::make_shared<DiscreteRadial>(std::vector<double>{1.0},
                                                 std::vector<double>{2.0});
  Generator gen(finite, 2);
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng rng(67);
  REQUIRE_THROWS_AS(sample_one(gen, law, rng), UnsupportedMeasureError);

  Rng base(68);
  int zero_rows = 0;
  for (int i = 0; i < 2000; ++i) {
    Rng row = base.substream(i);
    SampleTrace trace;
    SampleResult r = sample_one(gen, law, row, SampleMode::max_id, &trace);
    if (r.loops == 0) {
      ++zero_rows;
      REQUIRE(trace.exhausted);
      REQUIRE(r.y == std::vector<double>{0.0, 0.0});
      REQUIRE(r.u[0] == Approx(std::exp(-2.0)));  // F(0) = exp(-u_nu)
    }
  }
  // P(no points at all) = exp(-2) ~ 13.5%.
  REQUIRE(zero_rows > 150);
  REQUIRE(zero_rows < 400);
}

TEST_CASE("batched sampling is invariant in the thread count") {
  Generator gen(std::make_shared<GalambosRadial>(1.0, 2), 2);
  SimplexLaw law = SimplexLaw::uniform(2);
  constexpr std::uint64_t n = 5000;
  BatchResult serial = sample_batch(gen, law, n, Rng(77), 1);
  BatchResult parallel = sample_batch(gen, law, n, Rng(77), 4);
  REQUIRE(serial.values == parallel.values);
  REQUIRE(serial.loops == parallel.loops);

  // Rows match standalone draws on the same substream.
  Rng row3 = Rng(77).substream(3);
  SampleResult r3 = sample_one(gen, law, row3);
  REQUIRE(serial.values[3 * 2] == r3.u[0]);
  REQUIRE(serial.values[3 * 2 + 1] == r3.u[1]);
  REQUIRE(serial.loops[3] == r3.loops);

  double mean = 0.0;
  std::uint64_t hist_total = 0;
  for (std::uint64_t i = 0; i < n; ++i) mean += static_cast<double>(serial.loops[i]);
  for (std::uint64_t c : serial.summary.loop_histogram) hist_total += c;
  REQUIRE(serial.summary.mean_loops == Approx(mean / n).epsilon(1e-12));
  REQUIRE(hist_total == n);
  REQUIRE(serial.summary.n == n);
}

TEST_CASE("iteration cap turns pathologies into errors") {
  Generator gen(std::make_shared<GalambosRadial>(1.0, 2), 2);
  SimplexLaw law = SimplexLaw::uniform(2);

  // Find a substream needing more than one loop, then cap below it.
  Rng base(88);
  std::uint64_t row = 0;
  for (;; ++row) {
    Rng probe = base.substream(row);
    if (sample_one(gen, law, probe).loops >= 2) break;
  }
  Rng capped = base.substream(row);
  REQUIRE_THROWS_AS(sample_one(gen, law, capped, SampleMode::copula, nullptr, 1), NumericError);

  REQUIRE_THROWS_AS(sample_batch(gen, law, 50, Rng(88), 1, SampleMode::copula, 1),
                    PartialResultError);
  try {
    sample_batch(gen, law, 50, Rng(88), 1, SampleMode::copula, 1);
  } catch (const PartialResultError& e) {
    REQUIRE(e.completed() == row);
  }
}

TEST_CASE("dimension mismatch rejected") {
  Generator gen(std::make_shared<GalambosRadial>(1.0, 3), 3);
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng rng(1);
  REQUIRE_THROWS_AS(sample_one(gen, law, rng), std::invalid_argument);
}
