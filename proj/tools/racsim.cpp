// racsim CLI: sample generation, analytic CDF evaluation, and the pinned-seed
// validation suites. Exit codes: 0 success, 1 runtime failure, 2 usage/config
// error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "racsim/racsim.hpp"

namespace {

struct CommonArgs {
  std::string measure;
  int dim = 0;
  std::optional<std::uint64_t> seed;
};

std::string load_measure_text(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw racsim::ConfigError("measure: cannot open file '" + arg.substr(1) + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

nlohmann::json parse_json(const std::string& text, const std::string& key) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw racsim::ConfigError(key + ": not valid JSON");
  return j;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RACSIM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw racsim::ConfigError("seed: RACSIM_SEED is not an unsigned integer");
    }
  }
  return 0;
}

int resolve_dim(int flag_dim, const std::optional<int>& measure_dim) {
  if (flag_dim > 0 && measure_dim && flag_dim != *measure_dim)
    throw racsim::ConfigError("dim: conflicts with the dim inside the measure spec");
  if (flag_dim > 0) return flag_dim;
  if (measure_dim) return *measure_dim;
  throw racsim::ConfigError("dim: required for this measure family");
}

int cmd_sample(const CommonArgs& common, const std::string& simplex_arg, std::uint64_t n,
               const std::string& out_path, bool raw, int threads) {
  racsim::MeasureSpec spec =
      racsim::measure_from_json(parse_json(load_measure_text(common.measure), "measure"));
  int dim = resolve_dim(common.dim, spec.dim);
  if (dim < 2) throw racsim::ConfigError("dim: must be >= 2");
  if (n < 1) throw racsim::ConfigError("n: must be >= 1");
  if (threads < 1) throw racsim::ConfigError("threads: must be >= 1");

  nlohmann::json simplex_norm{{"simplex", "uniform"}};
  racsim::SimplexLaw law = racsim::SimplexLaw::uniform(dim);
  if (!simplex_arg.empty()) {
    simplex_norm = parse_json(simplex_arg, "simplex");
    law = racsim::simplex_from_json(simplex_norm, dim);
  }
  if (!raw && !std::isinf(spec.measure->total_mass()))
    throw racsim::ConfigError(
        "measure: finite total mass cannot produce copula output; pass --raw for the max-id law");
  if (!raw && !law.is_uniform())
    throw racsim::ConfigError(
        "simplex: non-uniform laws leave the copula family; pass --raw for the max-id law");

  std::uint64_t seed = resolve_seed(common.seed);
  racsim::Generator gen(spec.measure, dim);
  racsim::BatchResult batch =
      racsim::sample_batch(gen, law, n, racsim::Rng(seed), threads,
                           raw ? racsim::SampleMode::max_id : racsim::SampleMode::copula);

  nlohmann::json meta{{"command", "sample"}, {"measure", spec.normalized}, {"dim", dim},
                      {"simplex", simplex_norm}, {"n", n},       {"seed", seed},
                      {"raw", raw},             {"threads", threads}};
  std::ostringstream body;
  racsim::write_sample_csv(body, meta.dump(), batch.values, batch.loops, dim, raw);
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << body.str();
  }
  return 0;
}

int cmd_cdf(const CommonArgs& common, const std::string& u_arg) {
  racsim::MeasureSpec spec =
      racsim::measure_from_json(parse_json(load_measure_text(common.measure), "measure"));
  int dim = resolve_dim(common.dim, spec.dim);

  std::vector<double> u;
  std::stringstream ss(u_arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      u.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw racsim::ConfigError("u: '" + item + "' is not a number");
    }
  }
  if (static_cast<int>(u.size()) != dim)
    throw racsim::ConfigError("u: expected " + std::to_string(dim) + " comma-separated values");
  for (double v : u)
    if (!(v >= 0 && v <= 1)) throw racsim::ConfigError("u: values must lie in [0,1]");

  racsim::CopulaSpec copula{racsim::Generator(spec.measure, dim)};
  std::cout << std::setprecision(12) << copula.cdf(u) << '\n';
  return 0;
}

int cmd_validate(const std::string& suite, std::uint64_t oracle_K, bool corrupt) {
  auto names = racsim::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw racsim::ConfigError("suite: unknown suite '" + suite + "'");
  racsim::SuiteOptions opts;
  opts.oracle_truncation = oracle_K;
  opts.corrupt_pseudo_inverse = corrupt;
  std::vector<racsim::ReportEntry> entries = racsim::run_suite(suite, opts);
  bool all_pass = true;
  for (const auto& e : entries) {
    std::cout << racsim::report_json_line(e) << '\n';
    all_pass = all_pass && e.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"racsim: exact sampling and analytic evaluation of reciprocal Archimedean copulas"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string simplex_arg;
  std::string out_path;
  std::string u_arg;
  std::string suite = "all";
  std::uint64_t n = 1;
  std::uint64_t oracle_K = 10'000;
  int threads = 1;
  bool raw = false;
  bool corrupt = false;
  std::uint64_t seed_flag = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub, bool need_measure) {
    if (need_measure)
      sub->add_option("--measure", common.measure, "measure spec as JSON, or @file")->required();
    sub->add_option("--dim", common.dim, "dimension d >= 2 (optional when the measure pins it)");
    sub->add_option("--seed", seed_flag, "RNG seed (fallback: RACSIM_SEED, then 0)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  CLI::App* sample = app.add_subcommand("sample", "draw samples and write CSV");
  add_common(sample, true);
  sample->add_option("--n", n, "number of samples")->required();
  sample->add_option("--simplex", simplex_arg, "simplex law JSON (default uniform)");
  sample->add_option("--out", out_path, "output path (default stdout)");
  sample->add_flag("--raw", raw, "emit raw maxima (max-id law) instead of copula scale");
  sample->add_option("--threads", threads, "parallel streams; output is identical for any value");

  CLI::App* cdf = app.add_subcommand("cdf", "evaluate the copula CDF at a point");
  add_common(cdf, true);
  cdf->add_option("--u", u_arg, "comma-separated point in [0,1]^d")->required();

  CLI::App* validate = app.add_subcommand("validate", "run a pinned-seed validation suite");
  validate->add_option("--suite", suite, "margins|copula|oracle|loops|singular|williamson|all");
  validate->add_option("--K", oracle_K, "truncation depth of the brute-force oracle");
  validate->add_flag("--corrupt", corrupt, "negative control: perturb the sampler's inverse")
      ->group("");  // hidden; test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    common.seed = seed_given ? std::optional<std::uint64_t>(seed_flag) : std::nullopt;
    if (sample->parsed()) return cmd_sample(common, simplex_arg, n, out_path, raw, threads);
    if (cdf->parsed()) return cmd_cdf(common, u_arg);
    return cmd_validate(suite, oracle_K, corrupt);
  } catch (const racsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
