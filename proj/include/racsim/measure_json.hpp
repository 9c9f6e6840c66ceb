#pragma once

// JSON wire format for measures and simplex laws:
//   {"type":"galambos","theta":1.0,"dim":2}
//   {"type":"harmonic","theta":0.5}
//   {"type":"discrete","atoms":[...],"weights":[...]}
//   {"type":"approx","of":<spec>,"grid":{"lo":1e-4,"hi":1e2,"points":1000,"spacing":"log"}}
//   {"simplex":"uniform"} | {"simplex":"dirichlet","alpha":[...]}
// Every rejection names the offending key.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "racsim/error.hpp"
#include "racsim/radial.hpp"
#include "racsim/simplex.hpp"

namespace racsim {

struct MeasureSpec {
  std::shared_ptr<const RadialMeasure> measure;
  std::optional<int> dim;     // present when the family pins one (galambos)
  nlohmann::json normalized;  // the spec as parsed, for output metadata
};

namespace detail {

inline double require_positive_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(key + ": missing");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(key + ": must be a number");
  double x = v.get<double>();
  if (!(x > 0) || !std::isfinite(x)) throw ConfigError(key + ": must be a positive finite number");
  return x;
}

inline std::vector<double> grid_from_json(const nlohmann::json& j, const std::string& prefix) {
  double lo = require_positive_number(j, "lo");
  double hi = require_positive_number(j, "hi");
  if (!(lo < hi)) throw ConfigError(prefix + ".lo: must be below hi");
  if (!j.contains("points")) throw ConfigError(prefix + ".points: missing");
  if (!j.at("points").is_number_integer() || j.at("points").get<long long>() < 2)
    throw ConfigError(prefix + ".points: must be an integer >= 2");
  long long points = j.at("points").get<long long>();
  std::string spacing = j.value("spacing", std::string("log"));
  if (spacing != "log" && spacing != "linear")
    throw ConfigError(prefix + ".spacing: must be \"log\" or \"linear\"");
  std::vector<double> grid(points);
  for (long long i = 0; i < points; ++i) {
    double frac = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = spacing == "log" ? std::exp(std::log(hi) - frac * (std::log(hi) - std::log(lo)))
                               : hi - frac * (hi - lo);
  }
  grid.front() = hi;
  grid.back() = lo;
  return grid;
}

}  // namespace detail

inline MeasureSpec measure_from_json(const nlohmann::json& j,
                                     const std::string& prefix = "measure") {
  if (!j.is_object()) throw ConfigError(prefix + ": must be a JSON object");
  if (!j.contains("type")) throw ConfigError(prefix + ".type: missing");
  if (!j.at("type").is_string()) throw ConfigError(prefix + ".type: must be a string");
  std::string type = j.at("type").get<std::string>();

  if (type == "galambos") {
    double theta = detail::require_positive_number(j, "theta");
    if (!j.contains("dim")) throw ConfigError(prefix + ".dim: missing");
    if (!j.at("dim").is_number_integer() || j.at("dim").get<int>() < 2)
      throw ConfigError(prefix + ".dim: must be an integer >= 2");
    int dim = j.at("dim").get<int>();
    return {std::make_shared<GalambosRadial>(theta, dim), dim,
            nlohmann::json{{"type", "galambos"}, {"theta", theta}, {"dim", dim}}};
  }
  if (type == "harmonic") {
    double theta = detail::require_positive_number(j, "theta");
    return {std::make_shared<HarmonicRadial>(theta), std::nullopt,
            nlohmann::json{{"type", "harmonic"}, {"theta", theta}}};
  }
  if (type == "discrete") {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw ConfigError(prefix + ".atoms: missing or not an array");
    if (!j.contains("weights") || !j.at("weights").is_array())
      throw ConfigError(prefix + ".weights: missing or not an array");
    std::vector<double> atoms, weights;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_number()) throw ConfigError(prefix + ".atoms: entries must be numbers");
      atoms.push_back(a.get<double>());
    }
    for (const auto& w : j.at("weights")) {
      if (!w.is_number()) throw ConfigError(prefix + ".weights: entries must be numbers");
      weights.push_back(w.get<double>());
    }
    std::shared_ptr<const RadialMeasure> m;
    try {
      m = std::make_shared<DiscreteRadial>(atoms, weights);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(prefix + ": " + e.what());
    }
    return {m, std::nullopt,
            nlohmann::json{{"type", "discrete"}, {"atoms", atoms}, {"weights", weights}}};
  }
  if (type == "approx") {
    if (!j.contains("of")) throw ConfigError(prefix + ".of: missing");
    MeasureSpec inner = measure_from_json(j.at("of"), prefix + ".of");
    if (!j.contains("grid") || !j.at("grid").is_object())
      throw ConfigError(prefix + ".grid: missing or not an object");
    std::vector<double> grid = detail::grid_from_json(j.at("grid"), prefix + ".grid");
    auto m = std::make_shared<DiscreteRadial>(approximate_piecewise_constant(*inner.measure, grid));
    nlohmann::json norm{{"type", "approx"}, {"of", inner.normalized}, {"grid", j.at("grid")}};
    return {m, inner.dim, norm};
  }
  throw ConfigError(prefix + ".type: unknown measure type '" + type + "'");
}

inline SimplexLaw simplex_from_json(const nlohmann::json& j, int dim,
                                    const std::string& prefix = "simplex") {
  if (!j.is_object() || !j.contains("simplex"))
    throw ConfigError(prefix + ": expected an object with a \"simplex\" key");
  if (!j.at("simplex").is_string()) throw ConfigError(prefix + ": must be a string");
  std::string kind = j.at("simplex").get<std::string>();
  if (kind == "uniform") return SimplexLaw::uniform(dim);
  if (kind == "dirichlet") {
    if (!j.contains("alpha") || !j.at("alpha").is_array())
      throw ConfigError(prefix + ".alpha: missing or not an array");
    std::vector<double> alpha;
    for (const auto& a : j.at("alpha")) {
      if (!a.is_number() || !(a.get<double>() > 0))
        throw ConfigError(prefix + ".alpha: entries must be positive numbers");
      alpha.push_back(a.get<double>());
    }
    if (static_cast<int>(alpha.size()) != dim)
      throw ConfigError(prefix + ".alpha: length must equal dim");
    return SimplexLaw::dirichlet(std::move(alpha));
  }
  throw ConfigError(prefix + ": unknown simplex law '" + kind + "'");
}

}  // namespace racsim
