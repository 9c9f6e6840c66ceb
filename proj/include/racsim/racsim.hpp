#pragma once

#include "racsim/copula.hpp"
#include "racsim/csv.hpp"
#include "racsim/error.hpp"
#include "racsim/generator.hpp"
#include "racsim/measure_json.hpp"
#include "racsim/points.hpp"
#include "racsim/quadrature.hpp"
#include "racsim/radial.hpp"
#include "racsim/rng.hpp"
#include "racsim/sampler.hpp"
#include "racsim/simplex.hpp"
#include "racsim/stats.hpp"
#include "racsim/validate.hpp"
