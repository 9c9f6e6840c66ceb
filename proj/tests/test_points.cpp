#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "racsim/points.hpp"
#include "racsim/stats.hpp"

using Catch::Approx;
using namespace racsim;

TEST_CASE("exponential inverse transform") {
  REQUIRE(exponential_from_uniform(1.0 - std::exp(-1.0)) == Approx(1.0).epsilon(1e-12));
  REQUIRE(exponential_from_uniform(1e-18) == Approx(1e-18).epsilon(1e-6));
  REQUIRE(exponential_from_uniform(0.0) == 0.0);

  Rng rng(11);
  double mean = 0.0;
  constexpr int n = 1'000'000;
  for (int i = 0; i < n; ++i) mean += exponential_draw(rng);
  mean /= n;
  REQUIRE(mean > 0.997);
  REQUIRE(mean < 1.003);
}

TEST_CASE("stream equals the closed form applied to exponential partial sums") {
  GalambosRadial m(1.0, 2);  // S^{-1}(y) = 2/y
  Rng stream_rng(777);
  PointStream stream(m, stream_rng);

  Rng replay(777);
  double partial = 0.0;
  for (int k = 0; k < 100; ++k) {
    partial += exponential_draw(replay);
    auto point = stream.next();
    REQUIRE(point.has_value());
    REQUIRE(*point == Approx(2.0 / partial).epsilon(1e-14));
  }
}

TEST_CASE("emissions never increase") {
  for (std::shared_ptr<const RadialMeasure> m :
       {std::shared_ptr<const RadialMeasure>(std::make_shared<GalambosRadial>(0.5, 2)),
        std::shared_ptr<const RadialMeasure>(std::make_shared<HarmonicRadial>(0.5))}) {
    Rng rng(13);
    PointStream stream(*m, rng);
    double prev = kInf;
    for (int k = 0; k < 200; ++k) {
      auto point = stream.next();
      REQUIRE(point.has_value());
      REQUIRE(*point <= prev);
      prev = *point;
    }
  }
}

TEST_CASE("finite measure: termination count is Poisson(total mass)") {
  DiscreteRadial m({1.0}, {2.0});
  constexpr std::uint64_t streams = 100'000;
  Rng base(4242);
  std::vector<std::uint64_t> histogram;
  for (std::uint64_t s = 0; s < streams; ++s) {
    Rng rng = base.substream(s);
    PointStream stream(m, rng);
    while (stream.next()) {
    }
    // Exhausted streams stay exhausted.
    REQUIRE_FALSE(stream.next().has_value());
    std::uint64_t count = stream.emitted_count();
    if (count >= histogram.size()) histogram.resize(count + 1, 0);
    ++histogram[count];
  }
  ChiSquareFit fit = chi_square_poisson_fit(histogram, 2.0);
  INFO("chi2 = " << fit.statistic << " dof = " << fit.dof);
  REQUIRE(fit.p_value > 0.001);
}

TEST_CASE("same seed, same stream") {
  HarmonicRadial m(0.5);
  Rng a(90125), b(90125);
  PointStream sa(m, a), sb(m, b);
  for (int k = 0; k < 50; ++k) {
    auto pa = sa.next(), pb = sb.next();
    REQUIRE(pa.has_value());
    REQUIRE(*pa == *pb);
  }
}

TEST_CASE("first point has the analytic survival law") {
  // R1 = 2/e1 with e1 unit exponential, so exp(-2/R1) is uniform on (0,1).
  GalambosRadial m(1.0, 2);
  constexpr int n = 100'000;
  std::vector<double> transformed(n);
  Rng base(5150);
  for (int i = 0; i < n; ++i) {
    Rng rng = base.substream(i);
    PointStream stream(m, rng);
    transformed[i] = std::exp(-2.0 / *stream.next());
  }
  REQUIRE(ks_uniform(transformed) < 0.005);
}
