#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "shapfoil/dataset.hpp"

namespace shapfoil {

class LogicError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse failure with a 1-based line/column position.
class ParseError : public LogicError {
public:
  ParseError(std::string msg, std::size_t line, std::size_t col)
      : LogicError(std::move(msg)), line(line), col(col) {}
  std::size_t line, col;
};

class EmptyCoverage : public LogicError {
public:
  EmptyCoverage() : LogicError("clause covers no samples") {}
};

struct CatEq {
  std::string feature;
  std::string value;
  bool operator==(const CatEq&) const = default;
};
/// Negation-as-failure: satisfied iff the sample's value differs.
struct NegCatEq {
  std::string feature;
  std::string value;
  bool operator==(const NegCatEq&) const = default;
};
/// Inclusive interval on a numeric feature; +-infinity marks a missing bound.
struct NumRange {
  std::string feature;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool operator==(const NumRange&) const = default;
};
using Literal = std::variant<CatEq, NegCatEq, NumRange>;

const std::string& literal_feature(const Literal& l);

/// Head predicate for induced clauses: the positive label when it reads as an
/// identifier (red -> red(X)), else the target name (positive "1" ->
/// heart_disease(X)).
std::string head_name(const Schema& s);

struct Clause {
  std::string head;
  std::vector<Literal> body;  // no duplicates; at most one NumRange per feature
};

/// Predicts positive iff at least one clause covers the sample.
struct Hypothesis {
  std::vector<Clause> clauses;
};

/// True iff every body literal is satisfied; an empty body covers everything.
bool covers(const Clause& c, const Schema& schema, const Sample& s);

struct CoveragePartition {
  std::vector<int> covered_pos, covered_neg, uncovered;  // sample indices
};
CoveragePartition covered_partition(const Clause& c, const Dataset& d);

/// covered_pos / (covered_pos + covered_neg); throws EmptyCoverage when the
/// clause covers nothing.
double clause_precision(const Clause& c, const Dataset& d);

int hypothesis_predict(const Hypothesis& h, const Schema& schema, const Sample& s);

/// Renders clauses in the restricted Prolog form, one clause per line:
///   head(X) :- f(X,v), not g(X,w), h(X,F1), lo =< F1, F1 =< hi.
/// Reals are rounded to `rounding` decimals with trailing zeros trimmed.
std::string serialize_prolog(const Hypothesis& h, int rounding = 2);
std::string serialize_clause(const Clause& c, int rounding = 2);

/// Inverse of serialize_prolog up to rounding; rejects anything outside the
/// restricted language with a positioned ParseError. `%` starts a comment.
Hypothesis parse_prolog(const std::string& text);

}  // namespace shapfoil
