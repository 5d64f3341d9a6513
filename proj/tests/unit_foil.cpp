#include <doctest.h>

#include <cmath>

#include "shapfoil/eval.hpp"
#include "shapfoil/foil.hpp"
#include "shapfoil/strings.hpp"
#include "shapfoil/synth.hpp"

using namespace shapfoil;

namespace {

Dataset animals() {
  Schema s = parse_schema_text(
      "feature legs numeric\n"
      "feature covering categorical feathers,fur,scales\n"
      "target animal positive bird\n");
  return parse_csv(
      "legs,covering,animal\n"
      "2,feathers,bird\n"
      "2,feathers,bird\n"
      "2,feathers,bird\n"
      "4,fur,mammal\n"
      "4,fur,mammal\n"
      "0,scales,mammal\n"
      "2,fur,mammal\n",
      s);
}

}  // namespace

TEST_CASE("information gain follows the foil formula") {
  CHECK(info_gain(10, 10, 5, 0, 5) == doctest::Approx(5.0));
  CHECK(info_gain(8, 8, 4, 4, 4) == doctest::Approx(0.0));
  CHECK(info_gain(4, 12, 4, 4, 4) ==
        doctest::Approx(4.0 * (std::log2(0.5) - std::log2(0.25))));
  CHECK(info_gain(10, 10, 0, 5, 0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("candidate pool covers both categorical polarities and midpoints") {
  Dataset d = animals();
  auto pool = candidate_literals(d, Midpoints{});
  // legs distinct values {0,2,4} -> midpoints 1 and 3, two directions each
  int num_ranges = 0, cat_eq = 0, neg_cat = 0;
  for (const Literal& l : pool) {
    if (std::holds_alternative<NumRange>(l)) ++num_ranges;
    if (std::holds_alternative<CatEq>(l)) ++cat_eq;
    if (std::holds_alternative<NegCatEq>(l)) ++neg_cat;
  }
  CHECK(num_ranges == 4);
  CHECK(cat_eq == 3);
  CHECK(neg_cat == 3);
  CHECK(std::find(pool.begin(), pool.end(),
                  Literal{CatEq{"covering", "feathers"}}) != pool.end());
  auto has_upper_1 = std::find_if(pool.begin(), pool.end(), [](const Literal& l) {
    const auto* nr = std::get_if<NumRange>(&l);
    return nr && nr->hi == 1.0 && std::isinf(nr->lo);
  });
  CHECK(has_upper_1 != pool.end());
}

TEST_CASE("quantile thresholds are sorted and deduplicated") {
  Dataset d = animals();
  auto pool = candidate_literals(d, Quantiles{4});
  double prev = -std::numeric_limits<double>::infinity();
  int ranges = 0;
  for (const Literal& l : pool) {
    const auto* nr = std::get_if<NumRange>(&l);
    if (!nr || !std::isinf(nr->lo)) continue;
    CHECK(nr->hi > prev);
    prev = nr->hi;
    ++ranges;
  }
  CHECK(ranges >= 1);
  CHECK(ranges <= 3);
}

TEST_CASE("foil finds the single pure clause on clean data") {
  Dataset d = animals();
  FoilResult r = foil_induce(d, FoilParams{});
  REQUIRE(r.hypothesis.clauses.size() == 1);
  const Clause& c = r.hypothesis.clauses[0];
  CHECK(c.head == "bird");
  REQUIRE(c.body.size() == 1);
  CHECK(std::get<CatEq>(c.body[0]) == CatEq{"covering", "feathers"});
  CHECK(r.stats[0].covered_pos == 3);
  CHECK(r.stats[0].covered_neg == 0);
  CHECK_FALSE(r.stats[0].hit_max_length);

  EvalReport rep = evaluate_hypothesis(r.hypothesis, d);
  CHECK(rep.accuracy == 1.0);
}

TEST_CASE("repeated numeric choices intersect into one interval") {
  Schema s = parse_schema_text("feature x numeric\ntarget t positive p\n");
  std::string csv = "x,t\n";
  for (int i = 0; i < 30; ++i) {
    double v = i;
    csv += format_double_roundtrip(v) + "," + (v >= 10 && v <= 19 ? "p" : "q") + "\n";
  }
  Dataset d = parse_csv(csv, s);
  FoilResult r = foil_induce(d, FoilParams{});
  REQUIRE(r.hypothesis.clauses.size() >= 1);
  for (const Clause& c : r.hypothesis.clauses) {
    int ranges_on_x = 0;
    for (const Literal& l : c.body)
      if (std::holds_alternative<NumRange>(l)) ++ranges_on_x;
    CHECK(ranges_on_x <= 1);  // bounds merged, never duplicated
  }
  // The clause set must exactly capture [10, 19].
  EvalReport rep = evaluate_hypothesis(r.hypothesis, d);
  CHECK(rep.f1 == 1.0);
}

TEST_CASE("every positive ends up covered by some clause") {
  Dataset d = synthetic_dataset("clusters3", 3, 150);
  FoilResult r = foil_induce(d, FoilParams{});
  REQUIRE(!r.hypothesis.clauses.empty());
  CHECK(r.hypothesis.clauses[0].head == "red");
  for (const Sample& smp : d.samples) {
    if (smp.label != 1) continue;
    CHECK(hypothesis_predict(r.hypothesis, d.schema, smp) == 1);
  }
  REQUIRE(r.stats.size() == r.hypothesis.clauses.size());
}

TEST_CASE("max clause length caps specialization and is recorded") {
  Dataset d = synthetic_dataset("clusters3", 3, 150);
  FoilParams p;
  p.max_clause_length = 1;
  FoilResult r = foil_induce(d, p);
  bool any_hit = false;
  for (std::size_t i = 0; i < r.hypothesis.clauses.size(); ++i) {
    CHECK(r.hypothesis.clauses[i].body.size() <= 1);
    any_hit = any_hit || r.stats[i].hit_max_length;
  }
  CHECK(any_hit);
  CHECK_THROWS_AS(foil_induce(d, FoilParams{0, 1e-6, Midpoints{}}), LogicError);
}

TEST_CASE("foil requires positive examples") {
  Schema s = parse_schema_text("feature x numeric\ntarget t positive p\n");
  Dataset d = parse_csv("x,t\n1,q\n2,q\n", s);
  CHECK_THROWS_AS(foil_induce(d, FoilParams{}), LogicError);
}
