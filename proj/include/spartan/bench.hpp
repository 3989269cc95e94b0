#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "spartan/fit.hpp"
#include "spartan/params.hpp"

namespace spartan {

// Declarative description of one benchmark: simulate -> thin -> fit ->
// fill -> error statistics, repeated over replicates with derived seeds
// (seed + replicate index).
struct BenchPlan {
  CovarianceSpec model;               // generating model
  std::size_t n = 1000;
  double mean = 0.0;
  double alpha = 1.0;
  std::vector<double> thinning{0.66};  // validation fractions
  std::size_t replicates = 20;
  std::uint64_t seed = 1;
  std::vector<FitMethod> fits{FitMethod::mmom};
  bool fill_sp = true;
  bool fill_kwp = true;
  // Draw from the grid model through the banded factorization instead of the
  // dense stationary covariance (spartan model only; linear cost).
  bool lattice = false;
  // Include wall-clock fields in the report. Off by default so that reports
  // for the same plan and seed are byte-identical.
  bool timings = false;
};

BenchPlan parse_plan(const nlohmann::json& j);
nlohmann::json plan_to_json(const BenchPlan& plan);

// Execute the plan. The report is a JSON document with per-replicate fit and
// fill results and per-fraction aggregates; per-replicate failures are
// recorded in place of results, not fatal. Deterministic for a fixed plan
// (given timings = false).
nlohmann::json run_benchmark(const BenchPlan& plan);

}  // namespace spartan
