#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "racsim/csv.hpp"
#include "racsim/measure_json.hpp"

using Catch::Approx;
using namespace racsim;

namespace {

MeasureSpec parse(const std::string& text) {
  return measure_from_json(nlohmann::json::parse(text));
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("measure specs parse") {
  MeasureSpec g = parse(R"({"type":"galambos","theta":1.0,"dim":2})");
  REQUIRE(g.dim == 2);
  REQUIRE(g.measure->survival(0.5) == Approx(4.0));
  REQUIRE(g.normalized.at("type") == "galambos");

  MeasureSpec h = parse(R"({"type":"harmonic","theta":0.5})");
  REQUIRE_FALSE(h.dim.has_value());
  REQUIRE(h.measure->pseudo_inverse(0.7) == Approx(0.5));

  MeasureSpec d = parse(R"({"type":"discrete","atoms":[2,1],"weights":[3,5]})");
  REQUIRE(d.measure->total_mass() == 8.0);

  MeasureSpec a = parse(
      R"({"type":"approx","of":{"type":"galambos","theta":1.0,"dim":2},)"
      R"("grid":{"lo":1e-4,"hi":100.0,"points":1000,"spacing":"log"}})");
  REQUIRE(a.dim == 2);
  // The approximation is a finite staircase interpolating S on the grid.
  REQUIRE(std::isfinite(a.measure->total_mass()));
  REQUIRE(a.measure->survival(1.0) == Approx(2.0).epsilon(0.02));
  REQUIRE(a.measure->total_mass() == Approx(2.0 / 1e-4).epsilon(0.02));
}

TEST_CASE("config errors name the offending key") {
  REQUIRE(error_of(R"({"theta":1.0})").find("type") != std::string::npos);
  REQUIRE(error_of(R"({"type":"frechet"})").find("frechet") != std::string::npos);
  REQUIRE(error_of(R"({"type":"galambos","dim":2})").find("theta") != std::string::npos);
  REQUIRE(error_of(R"({"type":"galambos","theta":1.0})").find("dim") != std::string::npos);
  REQUIRE(error_of(R"({"type":"galambos","theta":-1.0,"dim":2})").find("theta") !=
          std::string::npos);
  REQUIRE(error_of(R"({"type":"discrete","atoms":[2,1]})").find("weights") != std::string::npos);
  REQUIRE(error_of(
              R"({"type":"approx","of":{"type":"harmonic","theta":1.0},)"
              R"("grid":{"lo":1.0,"hi":2.0,"points":10,"spacing":"cubic"}})")
              .find("grid.spacing") != std::string::npos);
  REQUIRE(error_of(R"({"type":"approx","of":{"type":"harmonic"},"grid":{}})")
              .find("of.theta") != std::string::npos);
  REQUIRE(error_of("[1,2,3]").find("measure") != std::string::npos);
}

TEST_CASE("simplex specs parse") {
  SimplexLaw u = simplex_from_json(nlohmann::json::parse(R"({"simplex":"uniform"})"), 3);
  REQUIRE(u.is_uniform());
  REQUIRE(u.dim() == 3);

  SimplexLaw d =
      simplex_from_json(nlohmann::json::parse(R"({"simplex":"dirichlet","alpha":[2,3]})"), 2);
  REQUIRE_FALSE(d.is_uniform());
  REQUIRE(d.alpha() == std::vector<double>{2.0, 3.0});

  auto fails = [&](const std::string& text, int dim) {
    try {
      simplex_from_json(nlohmann::json::parse(text), dim);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  REQUIRE(fails(R"({"simplex":"dirichlet","alpha":[2,3]})", 3).find("alpha") !=
          std::string::npos);
  REQUIRE(fails(R"({"simplex":"pyramid"})", 2).find("pyramid") != std::string::npos);
  REQUIRE(fails(R"({"simplex":"dirichlet","alpha":[2,-3]})", 2).find("alpha") !=
          std::string::npos);
}

TEST_CASE("shortest formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 12345.678901234567, 2.0 / 3.0, 1e300}) {
    REQUIRE(std::stod(format_shortest(v)) == v);
    REQUIRE(format_shortest(v).size() <= 24);  // 17 significant digits plus sign/exponent
  }
}

TEST_CASE("sample CSV layout") {
  std::vector<double> values = {0.25, 0.5, 1.0 / 3.0, 0.75};
  std::vector<std::uint64_t> loops = {3, 7};
  std::ostringstream os;
  write_sample_csv(os, R"({"seed":42})", values, loops, 2, false);
  std::istringstream in(os.str());
  std::string line;

  std::getline(in, line);
  REQUIRE(line.rfind("# ", 0) == 0);
  REQUIRE(line.find("\"seed\":42") != std::string::npos);

  std::getline(in, line);
  REQUIRE(line == "u1,u2,loops");

  std::getline(in, line);
  REQUIRE(line == "0.25,0.5,3");

  std::getline(in, line);
  auto comma = line.find(',');
  REQUIRE(std::stod(line.substr(0, comma)) == 1.0 / 3.0);
  bool has_more_rows = static_cast<bool>(std::getline(in, line)) && !line.empty();
  REQUIRE_FALSE(has_more_rows);

  // Raw mode labels the columns on the raw scale.
  std::ostringstream raw;
  write_sample_csv(raw, "{}", values, loops, 2, true);
  REQUIRE(raw.str().find("y1,y2,loops") != std::string::npos);
}
