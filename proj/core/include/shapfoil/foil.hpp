#pragma once

#include <string>
#include <vector>

#include "shapfoil/dataset.hpp"
#include "shapfoil/logic.hpp"

namespace shapfoil {

struct Midpoints {};
struct Quantiles {
  int k = 4;
};
using ThresholdStrategy = std::variant<Midpoints, Quantiles>;

struct FoilParams {
  int max_clause_length = 8;
  double min_gain = 1e-6;
  ThresholdStrategy numeric_threshold_strategy = Midpoints{};
};

/// Propositional refinement pool: CatEq/NegCatEq per (categorical feature,
/// value), and half-bounded intervals f <= t / f >= t for thresholds t taken
/// at midpoints of consecutive distinct values (or k quantiles).
std::vector<Literal> candidate_literals(const Dataset& d, const ThresholdStrategy& strategy);

/// FOIL information gain: t (log2 p1/(p1+n1) - log2 p0/(p0+n0)). A literal
/// covering zero positives scores -infinity.
double info_gain(std::size_t p0, std::size_t n0, std::size_t p1, std::size_t n1, std::size_t t);

struct FoilClauseStats {
  std::size_t covered_pos = 0, covered_neg = 0;
  bool hit_max_length = false;  // accepted while still covering negatives
};

struct FoilResult {
  Hypothesis hypothesis;
  std::vector<FoilClauseStats> stats;
};

/// Classic sequential covering: learn one clause by greedy max-gain
/// specialization, remove the positives it covers, repeat. The negative pool
/// is reset to all remaining negatives at each outer iteration.
FoilResult foil_induce(const Dataset& d, const FoilParams& params);

}  // namespace shapfoil
