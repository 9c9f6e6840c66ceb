#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "racsim/copula.hpp"

using Catch::Approx;
using namespace racsim;

namespace {

CopulaSpec galambos_spec(double theta, int d) {
  return CopulaSpec(Generator(std::make_shared<GalambosRadial>(theta, d), d));
}

}  // namespace

TEST_CASE("grounded, uniform margins, frozen bivariate value") {
  CopulaSpec spec = galambos_spec(1.0, 2);
  REQUIRE(spec.cdf(std::vector<double>{0.3, 0.0}) == 0.0);
  REQUIRE(spec.cdf(std::vector<double>{1.0, 1.0}) == 1.0);

  CopulaSpec spec3 = galambos_spec(1.0, 3);
  for (double u : {0.1, 0.37, 0.92})
    REQUIRE(spec3.cdf(std::vector<double>{u, 1.0, 1.0}) == Approx(u).epsilon(1e-12));

  // Lambda(t) = 1/t and F^{-1}(e^-1) = 1, so log C = -1 - 1 + 1/2.
  double e1 = std::exp(-1.0);
  REQUIRE(spec.cdf(std::vector<double>{e1, e1}) == Approx(std::exp(-1.5)).epsilon(1e-12));
}

TEST_CASE("bivariate inclusion-exclusion signs against the product form") {
  CopulaSpec spec = galambos_spec(1.0, 2);
  const Generator& gen = spec.generator();
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    double u1 = 0.02 + 0.96 * rng.uniform01();
    double u2 = 0.02 + 0.96 * rng.uniform01();
    double x1 = gen.inverse(u1);
    double x2 = gen.inverse(u2);
    double direct_log = -gen.exponent_lambda(x1) - gen.exponent_lambda(x2) +
                        gen.exponent_lambda(x1 + x2);
    double impl_log = std::log(spec.cdf(std::vector<double>{u1, u2}));
    REQUIRE(impl_log == Approx(direct_log).epsilon(1e-10).margin(1e-12));
  }
}

TEST_CASE("monotone in every coordinate") {
  CopulaSpec spec(Generator(std::make_shared<GalambosRadial>(0.5, 3), 3));
  Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> lo(3), hi(3);
    for (int j = 0; j < 3; ++j) {
      lo[j] = rng.uniform01();
      hi[j] = lo[j] + (1.0 - lo[j]) * rng.uniform01();
    }
    REQUIRE(spec.cdf(lo) <= spec.cdf(hi) + 1e-12);
  }
}

TEST_CASE("Frechet bounds") {
  std::vector<CopulaSpec> specs;
  specs.push_back(galambos_spec(1.0, 2));
  specs.push_back(galambos_spec(2.0, 3));
  specs.push_back(CopulaSpec(Generator(std::make_shared<HarmonicRadial>(0.5), 2)));
  Rng rng(43);
  for (const auto& spec : specs) {
    int d = spec.dim();
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> u(d);
      double sum = 0.0, min_u = 1.0;
      for (int j = 0; j < d; ++j) {
        u[j] = rng.uniform01();
        sum += u[j];
        min_u = std::min(min_u, u[j]);
      }
      double c = spec.cdf(u);
      REQUIRE(c >= std::max(sum - d + 1.0, 0.0) - 1e-9);
      REQUIRE(c <= min_u + 1e-9);
    }
  }
}

TEST_CASE("capacity limit on exact enumeration") {
  CopulaSpec spec = galambos_spec(1.0, 21);
  std::vector<double> u(21, 0.5);
  REQUIRE_THROWS_AS(spec.cdf(u), CapacityError);
}

TEST_CASE("argument validation") {
  CopulaSpec spec = galambos_spec(1.0, 2);
  REQUIRE_THROWS_AS(spec.cdf(std::vector<double>{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(spec.cdf(std::vector<double>{0.5, 1.2}), std::invalid_argument);
  auto finite = std::make_shared<DiscreteRadial>(std::vector<double>{1.0},
                                                 std::vector<double>{2.0});
  REQUIRE_THROWS_AS(CopulaSpec(Generator(finite, 2)), UnsupportedMeasureError);
}

TEST_CASE("max-id Monte Carlo agrees with the subset formula") {
  auto m = std::make_shared<GalambosRadial>(1.0, 2);
  CopulaSpec spec(Generator(m, 2));
  const Generator& gen = spec.generator();
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng rng(44);
  for (std::vector<double> y : {std::vector<double>{0.8, 1.2}, {1.0, 1.0}, {2.5, 0.6}}) {
    MaxIdEstimate est = maxid_cdf_monte_carlo(*m, law, y, 100'000, rng);
    REQUIRE_FALSE(est.underflow);
    std::vector<double> u = {gen.cdf(y[0]), gen.cdf(y[1])};
    double ref = spec.cdf(u);
    REQUIRE(std::abs(est.value - ref) <= 3.0 * est.std_error);
  }
}

TEST_CASE("max-id estimate approaches one for huge arguments") {
  auto m = std::make_shared<GalambosRadial>(1.0, 2);
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng rng(45);
  MaxIdEstimate est = maxid_cdf_monte_carlo(*m, law, std::vector<double>{1e6, 1e6}, 20'000, rng);
  REQUIRE(est.value > 0.999);
}

TEST_CASE("max-id scaling: doubling the measure squares the CDF") {
  auto base = std::make_shared<GalambosRadial>(1.0, 2);
  auto doubled = std::make_shared<ScaledRadial>(base, 2.0);
  auto halved = std::make_shared<ScaledRadial>(base, 0.5);
  SimplexLaw law = SimplexLaw::uniform(2);
  std::vector<double> y = {1.3, 0.9};
  constexpr std::uint64_t n_mc = 50'000;

  Rng r1(46), r2(46), r3(46);  // matched streams
  MaxIdEstimate one = maxid_cdf_monte_carlo(*base, law, y, n_mc, r1);
  MaxIdEstimate two = maxid_cdf_monte_carlo(*doubled, law, y, n_mc, r2);
  MaxIdEstimate half = maxid_cdf_monte_carlo(*halved, law, y, n_mc, r3);
  REQUIRE(two.value == Approx(one.value * one.value).epsilon(1e-13));
  REQUIRE(half.value * half.value == Approx(one.value).epsilon(1e-13));
}

TEST_CASE("max-id underflow is flagged, not propagated") {
  auto m = std::make_shared<GalambosRadial>(0.5, 2);
  SimplexLaw law = SimplexLaw::uniform(2);
  Rng rng(47);
  MaxIdEstimate est =
      maxid_cdf_monte_carlo(*m, law, std::vector<double>{1e-300, 1e-300}, 100, rng);
  REQUIRE(est.underflow);
  REQUIRE(est.value == 0.0);

  REQUIRE_THROWS_AS(
      maxid_cdf_monte_carlo(*m, law, std::vector<double>{1.0, -1.0}, 100, rng),
      std::invalid_argument);
  REQUIRE_THROWS_AS(maxid_cdf_monte_carlo(*m, law, std::vector<double>{1.0}, 100, rng),
                    std::invalid_argument);
}
