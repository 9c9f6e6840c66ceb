#pragma once

// Statistical validation harness: the truncated brute-force oracle, empirical
// copula discrepancy, singular-component census, loop-count benchmarking, and
// the named suites behind `validate --suite ...`. Every suite runs on pinned
// seeds and fixed thresholds, so a passing build stays green deterministically.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "racsim/copula.hpp"
#include "racsim/csv.hpp"
#include "racsim/sampler.hpp"
#include "racsim/stats.hpp"

namespace racsim {

// Componentwise max over the first K points of the stream with uniform
// simplex weights. Converges in distribution to the exact law as K grows;
// the exact sampler is tested against it.
inline std::vector<double> truncated_oracle_sample(const RadialMeasure& m, int dim,
                                                   std::uint64_t K, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("truncated_oracle_sample: dim must be >= 2");
  if (K < 1) throw std::invalid_argument("truncated_oracle_sample: K must be >= 1");
  SimplexLaw law = SimplexLaw::uniform(dim);
  std::vector<double> y(dim, 0.0);
  std::vector<double> q(dim);
  PointStream stream(m, rng);
  for (std::uint64_t k = 0; k < K; ++k) {
    auto point = stream.next();
    if (!point) break;
    law.sample(rng, q);
    for (int i = 0; i < dim; ++i) y[i] = std::max(y[i], *point * q[i]);
  }
  return y;
}

// Worst absolute gap between the empirical joint CDF of the sample rows and a
// reference CDF over the probe grid.
template <class Cdf>
double empirical_copula_discrepancy(const std::vector<double>& rows, int dim, Cdf&& reference,
                                    std::span<const std::vector<double>> grid) {
  if (dim < 1 || rows.size() % dim != 0)
    throw std::invalid_argument("empirical_copula_discrepancy: bad row matrix");
  if (grid.empty()) throw std::invalid_argument("empirical_copula_discrepancy: empty grid");
  std::size_t n = rows.size() / dim;
  if (n < 1) throw std::invalid_argument("empirical_copula_discrepancy: no samples");
  double worst = 0.0;
  for (const auto& g : grid) {
    if (static_cast<int>(g.size()) != dim)
      throw std::invalid_argument("empirical_copula_discrepancy: grid point dimension mismatch");
    std::uint64_t count = 0;
    for (std::size_t r = 0; r < n; ++r) {
      bool inside = true;
      for (int j = 0; j < dim && inside; ++j) inside = rows[r * dim + j] <= g[j];
      count += inside;
    }
    double empirical = static_cast<double>(count) / static_cast<double>(n);
    worst = std::max(worst, std::abs(empirical - reference(std::span<const double>(g))));
  }
  return worst;
}

// Counts raw bivariate samples landing on the sets {y1 + y2 = a_k} for the
// first K atoms of the 1/k-atom family: a single point of the stream sets
// both maxima there, so the component sum reproduces the radius to rounding.
// The 1e-12 window absorbs the two normalization roundings.
inline std::vector<std::uint64_t> singular_component_census(const std::vector<double>& rows,
                                                            int dim, const HarmonicRadial& m,
                                                            int K) {
  if (dim != 2)
    throw UnsupportedMeasureError("singular_component_census: only dim = 2 is supported");
  if (K < 1) throw std::invalid_argument("singular_component_census: K must be >= 1");
  if (rows.size() % 2 != 0) throw std::invalid_argument("singular_component_census: bad row matrix");
  std::vector<double> atoms(K);
  for (int k = 1; k <= K; ++k) atoms[k - 1] = m.pseudo_inverse(m.theta() * (k - 0.5));
  std::vector<std::uint64_t> counts(K, 0);
  std::size_t n = rows.size() / 2;
  for (std::size_t r = 0; r < n; ++r) {
    double sum = rows[2 * r] + rows[2 * r + 1];
    for (int k = 0; k < K; ++k) {
      if (std::abs(sum - atoms[k]) <= 1e-12) {
        ++counts[k];
        break;
      }
    }
  }
  return counts;
}

struct LoopBenchmark {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> reference;  // closed form, present for the theta = 1 benchmark
};

// Empirical E[M] with a 3-sigma normal interval; attaches the analytic
// reference when the measure is the theta = 1 power-law benchmark.
inline LoopBenchmark loop_count_benchmark(const Generator& gen, const SimplexLaw& law,
                                          std::uint64_t n, Rng rng) {
  if (n < 1) throw std::invalid_argument("loop_count_benchmark: n must be >= 1");
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng row = rng.substream(i);
    SampleResult r = sample_one(gen, law, row, SampleMode::max_id);
    double v = static_cast<double>(r.loops);
    double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  double se = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  LoopBenchmark out{mean, mean - 3.0 * se, mean + 3.0 * se, std::nullopt};
  if (auto* g = dynamic_cast<const GalambosRadial*>(&gen.measure()); g && g->theta() == 1.0)
    out.reference = expected_loops_galambos_theta1(gen.dim());
  return out;
}

// Test instrument: inflates S^{-1} by 5% while leaving every analytic formula
// untouched. Sampling through it must trip the statistical suites (negative
// control proving they have power).
class PerturbedInverseRadial final : public RadialMeasure {
 public:
  explicit PerturbedInverseRadial(std::shared_ptr<const RadialMeasure> base)
      : base_(std::move(base)) {
    if (!base_) throw std::invalid_argument("PerturbedInverseRadial: null base");
  }
  double survival(double t) const override { return base_->survival(t); }
  double pseudo_inverse(double y) const override { return 1.05 * base_->pseudo_inverse(y); }
  double total_mass() const override { return base_->total_mass(); }
  bool has_density() const override { return base_->has_density(); }
  double density(double x) const override { return base_->density(x); }
  double lambda(double t, int dim) const override { return base_->lambda(t, dim); }
  bool has_lambda_inverse(int dim) const override { return base_->has_lambda_inverse(dim); }
  double lambda_inverse(double ell, int dim) const override {
    return base_->lambda_inverse(ell, dim);
  }
  bool has_lambda_derivatives(int dim) const override { return base_->has_lambda_derivatives(dim); }
  double lambda_derivative(double t, int order, int dim) const override {
    return base_->lambda_derivative(t, order, dim);
  }

 private:
  std::shared_ptr<const RadialMeasure> base_;
};

struct ReportEntry {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
};

inline std::string report_json_line(const ReportEntry& e) {
  std::string out = "{\"test\":\"";
  out += e.test;
  out += "\",\"statistic\":";
  out += format_shortest(e.statistic);
  out += ",\"threshold\":";
  out += format_shortest(e.threshold);
  out += ",\"pass\":";
  out += e.pass ? "true" : "false";
  out += ",\"seed\":";
  out += std::to_string(e.seed);
  out += ",\"n\":";
  out += std::to_string(e.n);
  out += "}";
  return out;
}

struct SuiteOptions {
  std::uint64_t oracle_truncation = 10'000;  // K for the truncated oracle
  bool corrupt_pseudo_inverse = false;       // negative-control hook
};

inline std::vector<std::string> suite_names() {
  return {"margins", "copula", "oracle", "loops", "singular", "williamson", "all"};
}

namespace detail {

inline std::shared_ptr<const RadialMeasure> maybe_corrupt(
    std::shared_ptr<const RadialMeasure> m, const SuiteOptions& opts) {
  if (!opts.corrupt_pseudo_inverse) return m;
  return std::make_shared<PerturbedInverseRadial>(std::move(m));
}

inline std::vector<double> batch_column(const BatchResult& batch, int j) {
  std::size_t n = batch.loops.size();
  std::vector<double> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = batch.values[i * batch.dim + j];
  return col;
}

inline std::vector<double> batch_rowwise(const BatchResult& batch, bool want_min) {
  std::size_t n = batch.loops.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = batch.values[i * batch.dim];
    for (int j = 1; j < batch.dim; ++j) {
      double x = batch.values[i * batch.dim + j];
      v = want_min ? std::min(v, x) : std::max(v, x);
    }
    out[i] = v;
  }
  return out;
}

struct NamedMeasure {
  std::string name;
  std::shared_ptr<const RadialMeasure> measure;
  int dim;
  std::uint64_t seed;
};

inline void margins_suite(std::vector<ReportEntry>& out, const SuiteOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  std::vector<NamedMeasure> configs;
  std::uint64_t seed = 1301;
  for (double theta : {0.5, 1.0, 2.0})
    for (int d : {2, 3})
      configs.push_back({"galambos[theta=" + format_shortest(theta) + ",d=" + std::to_string(d) + "]",
                         std::make_shared<GalambosRadial>(theta, d), d, seed++});
  for (double theta : {0.5, 0.025})
    configs.push_back({"harmonic[theta=" + format_shortest(theta) + ",d=2]",
                       std::make_shared<HarmonicRadial>(theta), 2, seed++});

  constexpr std::uint64_t n = 100'000;
  constexpr double threshold = 0.0061;  // 99% KS band at n = 1e5, with headroom
  std::uint64_t total = 0;
  for (const auto& cfg : configs) {
    Generator gen(maybe_corrupt(cfg.measure, opts), cfg.dim);
    BatchResult batch = sample_batch(gen, SimplexLaw::uniform(cfg.dim), n, Rng(cfg.seed));
    for (int j = 0; j < cfg.dim; ++j) {
      double ks = ks_uniform(batch_column(batch, j));
      out.push_back({"margins/" + cfg.name + "/u" + std::to_string(j + 1), ks, threshold,
                     ks < threshold, cfg.seed, n});
    }
    total += n;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.push_back({"margins/runtime_seconds", seconds, 60.0, seconds < 60.0, 0, total});
}

inline std::vector<std::vector<double>> tensor_grid(std::span<const double> levels, int dim) {
  std::vector<std::vector<double>> grid;
  std::vector<std::size_t> idx(dim, 0);
  for (;;) {
    std::vector<double> point(dim);
    for (int j = 0; j < dim; ++j) point[j] = levels[idx[j]];
    grid.push_back(std::move(point));
    int j = 0;
    while (j < dim && ++idx[j] == levels.size()) idx[j++] = 0;
    if (j == dim) break;
  }
  return grid;
}

inline void copula_suite(std::vector<ReportEntry>& out, const SuiteOptions& opts) {
  constexpr std::uint64_t n = 100'000;
  constexpr double threshold = 0.01;
  const std::vector<double> levels2 = {1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6};
  const std::vector<double> levels3 = {0.25, 0.5, 0.75};

  struct Cfg {
    NamedMeasure nm;
    std::vector<std::vector<double>> grid;
  };
  std::vector<Cfg> configs;
  configs.push_back({{"galambos_theta1_d2", std::make_shared<GalambosRadial>(1.0, 2), 2, 1401},
                     tensor_grid(levels2, 2)});
  configs.push_back({{"galambos_theta1_d3", std::make_shared<GalambosRadial>(1.0, 3), 3, 1402},
                     tensor_grid(levels3, 3)});
  configs.push_back({{"harmonic_theta0.5_d2", std::make_shared<HarmonicRadial>(0.5), 2, 1403},
                     tensor_grid(levels2, 2)});

  for (const auto& cfg : configs) {
    CopulaSpec spec(Generator(cfg.nm.measure, cfg.nm.dim));
    Generator sampling_gen(maybe_corrupt(cfg.nm.measure, opts), cfg.nm.dim);
    BatchResult batch =
        sample_batch(sampling_gen, SimplexLaw::uniform(cfg.nm.dim), n, Rng(cfg.nm.seed));
    double disc = empirical_copula_discrepancy(
        batch.values, cfg.nm.dim, [&](std::span<const double> u) { return spec.cdf(u); },
        cfg.grid);
    out.push_back({"copula/" + cfg.nm.name + "_grid", disc, threshold, disc < threshold,
                   cfg.nm.seed, n});
  }

  // Max-id consistency: the minimum-over-spread Monte Carlo formula must agree
  // with the subset-enumeration CF at raw probe points.
  struct MaxIdCfg {
    NamedMeasure nm;
    std::vector<std::vector<double>> probes;
  };
  std::vector<MaxIdCfg> maxid_configs;
  maxid_configs.push_back(
      {{"galambos_theta1_d2", std::make_shared<GalambosRadial>(1.0, 2), 2, 1411},
       {{0.7, 1.3}, {1.0, 1.0}, {2.0, 0.8}, {1.5, 3.0}, {0.5, 0.9}}});
  maxid_configs.push_back(
      {{"harmonic_theta0.5_d2", std::make_shared<HarmonicRadial>(0.5), 2, 1412},
       {{0.3, 0.6}, {0.45, 0.45}, {0.7, 0.2}, {0.85, 0.55}, {0.25, 0.35}}});

  constexpr std::uint64_t n_mc = 100'000;
  for (const auto& cfg : maxid_configs) {
    CopulaSpec spec(Generator(cfg.nm.measure, cfg.nm.dim));
    const Generator& gen = spec.generator();
    Rng rng(cfg.nm.seed);
    double worst_z = 0.0;
    bool ok = true;
    for (const auto& y : cfg.probes) {
      MaxIdEstimate est = maxid_cdf_monte_carlo(*cfg.nm.measure, SimplexLaw::uniform(cfg.nm.dim),
                                                y, n_mc, rng);
      std::vector<double> u(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) u[i] = gen.cdf(y[i]);
      double ref = spec.cdf(u);
      if (est.underflow || !(est.std_error > 0)) {
        ok = false;
        continue;
      }
      worst_z = std::max(worst_z, std::abs(est.value - ref) / est.std_error);
    }
    out.push_back({"copula/maxid/" + cfg.nm.name, worst_z, 3.0, ok && worst_z <= 3.0,
                   cfg.nm.seed, n_mc});
  }
}

inline void oracle_suite(std::vector<ReportEntry>& out, const SuiteOptions& opts) {
  constexpr std::uint64_t n = 10'000;
  constexpr double threshold = 0.01;  // two-sample KS p-value floor

  struct Cfg {
    std::string name;
    std::shared_ptr<const RadialMeasure> measure;
    std::uint64_t seed_exact;
    std::uint64_t seed_oracle;
  };
  std::vector<Cfg> configs = {
      {"galambos_theta1_d2", std::make_shared<GalambosRadial>(1.0, 2), 1501, 1502},
      {"harmonic_theta0.5_d2", std::make_shared<HarmonicRadial>(0.5), 1503, 1504},
  };

  for (const auto& cfg : configs) {
    const int d = 2;
    Generator gen(maybe_corrupt(cfg.measure, opts), d);
    BatchResult exact =
        sample_batch(gen, SimplexLaw::uniform(d), n, Rng(cfg.seed_exact), 1, SampleMode::max_id);

    BatchResult oracle;
    oracle.dim = d;
    oracle.values.reserve(n * d);
    oracle.loops.assign(n, 0);
    Rng orc(cfg.seed_oracle);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<double> y = truncated_oracle_sample(*cfg.measure, d, opts.oracle_truncation, orc);
      oracle.values.insert(oracle.values.end(), y.begin(), y.end());
    }

    auto push = [&](const std::string& what, std::vector<double> a, std::vector<double> b) {
      TwoSampleKs ks = ks_two_sample(std::move(a), std::move(b));
      out.push_back({"oracle/" + cfg.name + "/" + what, ks.p_value, threshold,
                     ks.p_value > threshold, cfg.seed_exact, n});
    };
    for (int j = 0; j < d; ++j)
      push("u" + std::to_string(j + 1), batch_column(exact, j), batch_column(oracle, j));
    push("min", batch_rowwise(exact, true), batch_rowwise(oracle, true));
    push("max", batch_rowwise(exact, false), batch_rowwise(oracle, false));
  }

  // Finite-measure stream termination: the emitted count is Poisson(u_nu).
  {
    constexpr std::uint64_t streams = 100'000;
    constexpr std::uint64_t seed = 1510;
    DiscreteRadial finite({1.0}, {2.0});
    std::vector<std::uint64_t> histogram;
    Rng base(seed);
    for (std::uint64_t s = 0; s < streams; ++s) {
      Rng rng = base.substream(s);
      PointStream stream(finite, rng);
      while (stream.next()) {
      }
      std::uint64_t count = stream.emitted_count();
      if (count >= histogram.size()) histogram.resize(count + 1, 0);
      ++histogram[count];
    }
    ChiSquareFit fit = chi_square_poisson_fit(histogram, finite.total_mass());
    out.push_back({"oracle/poisson_termination", fit.p_value, 0.001, fit.p_value > 0.001, seed,
                   streams});
  }
}

inline void loops_suite(std::vector<ReportEntry>& out, const SuiteOptions& opts) {
  constexpr std::uint64_t n = 100'000;
  constexpr double tolerance = 0.03;
  std::uint64_t seed = 1601;
  for (int d : {2, 3, 5}) {
    auto measure = std::make_shared<GalambosRadial>(1.0, d);
    Generator gen(maybe_corrupt(measure, opts), d);
    LoopBenchmark bench = loop_count_benchmark(gen, SimplexLaw::uniform(d), n, Rng(seed));
    double ref = expected_loops_galambos_theta1(d);
    double rel = std::abs(bench.mean - ref) / ref;
    out.push_back({"loops/galambos_theta1_d" + std::to_string(d), rel, tolerance, rel < tolerance,
                   seed, n});
    ++seed;
  }
}

inline void singular_suite(std::vector<ReportEntry>& out, const SuiteOptions& opts) {
  constexpr std::uint64_t n = 2000;
  constexpr int census_depth = 3;
  auto harmonic = std::make_shared<HarmonicRadial>(0.5);
  {
    Generator gen(maybe_corrupt(harmonic, opts), 2);
    BatchResult batch =
        sample_batch(gen, SimplexLaw::uniform(2), n, Rng(1701), 1, SampleMode::max_id);
    auto census = singular_component_census(batch.values, 2, *harmonic, census_depth);
    double c1 = static_cast<double>(census[0]);
    double c2 = static_cast<double>(census[1]);
    double c3 = static_cast<double>(census[2]);
    out.push_back({"singular/harmonic_c1_positive", c1, 0.0, c1 > 0.0, 1701, n});
    // c_k >= c_{k+1} up to 3-sigma multinomial noise on the difference
    double noise12 = 3.0 * std::sqrt(c1 + c2 + 1.0);
    out.push_back(
        {"singular/harmonic_mass_monotone_12", c1 - c2, -noise12, c1 - c2 >= -noise12, 1701, n});
    double noise23 = 3.0 * std::sqrt(c2 + c3 + 1.0);
    out.push_back(
        {"singular/harmonic_mass_monotone_23", c2 - c3, -noise23, c2 - c3 >= -noise23, 1701, n});
  }
  {
    auto galambos = std::make_shared<GalambosRadial>(1.0, 2);
    Generator gen(maybe_corrupt(galambos, opts), 2);
    BatchResult batch =
        sample_batch(gen, SimplexLaw::uniform(2), n, Rng(1702), 1, SampleMode::max_id);
    auto census = singular_component_census(batch.values, 2, *harmonic, census_depth);
    double total = 0;
    for (auto c : census) total += static_cast<double>(c);
    out.push_back({"singular/galambos_control_zero", total, 0.0, total == 0.0, 1702, n});
  }
}

inline void williamson_suite(std::vector<ReportEntry>& out, const SuiteOptions& /*opts*/) {
  constexpr int probes = 20;
  for (int d : {2, 3}) {
    auto measure = std::make_shared<GalambosRadial>(1.0, d);
    Generator gen(measure, d);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
      double t = 0.5 * std::pow(6.0, i / (probes - 1.0));  // log-spaced on [0.5, 3]
      double rebuilt = gen.williamson_survival(t, DerivativeScheme::finite_difference);
      double truth = measure->survival(t);
      worst = std::max(worst, std::abs(rebuilt - truth) / truth);
    }
    out.push_back({"williamson/galambos_theta1_d" + std::to_string(d), worst, 1e-6, worst < 1e-6,
                   0, probes});
  }
}

}  // namespace detail

inline std::vector<ReportEntry> run_suite(const std::string& name, const SuiteOptions& opts = {}) {
  std::vector<ReportEntry> out;
  bool all = name == "all";
  bool known = all;
  if (all || name == "margins") detail::margins_suite(out, opts), known = true;
  if (all || name == "copula") detail::copula_suite(out, opts), known = true;
  if (all || name == "oracle") detail::oracle_suite(out, opts), known = true;
  if (all || name == "loops") detail::loops_suite(out, opts), known = true;
  if (all || name == "singular") detail::singular_suite(out, opts), known = true;
  if (all || name == "williamson") detail::williamson_suite(out, opts), known = true;
  if (!known) throw std::invalid_argument("run_suite: unknown suite '" + name + "'");
  return out;
}

}  // namespace racsim
