// Minimal library usage: draw a bivariate sample from the 1/k-atom family and
// print it as CSV. The singular diagonals y1 + y2 = 1/k show up as curved
// line segments once plotted on copula scale.
//
//   ./scatter_demo [theta] [n]  >  scatter.csv

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>

#include "racsim/racsim.hpp"

int main(int argc, char** argv) {
  double theta = argc > 1 ? std::stod(argv[1]) : 0.5;
  std::uint64_t n = argc > 2 ? std::stoull(argv[2]) : 2000;

  auto measure = std::make_shared<racsim::HarmonicRadial>(theta);
  racsim::Generator gen(measure, 2);
  racsim::SimplexLaw law = racsim::SimplexLaw::uniform(2);
  racsim::Rng rng(42);

  std::cout << "u1,u2\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    racsim::SampleResult r = racsim::sample_one(gen, law, rng);
    std::cout << racsim::format_shortest(r.u[0]) << ',' << racsim::format_shortest(r.u[1])
              << '\n';
  }
  return 0;
}
