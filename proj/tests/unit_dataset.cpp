#include <doctest.h>

#include <cmath>
#include <set>

#include "shapfoil/dataset.hpp"
#include "shapfoil/strings.hpp"

using namespace shapfoil;

namespace {

const char* kToySchema =
    "feature a numeric\n"
    "feature c categorical u,v\n"
    "target t positive p\n";

Dataset toy(const std::string& csv) { return parse_csv(csv, parse_schema_text(kToySchema)); }

}  // namespace

TEST_CASE("schema parsing sorts domains and validates structure") {
  Schema s = parse_schema_text(
      "feature color categorical red,blue,green\n"
      "# a comment line\n"
      "feature age numeric\n"
      "target cls positive yes\n");
  REQUIRE(s.feature_names.size() == 2);
  CHECK(s.feature_names[0] == "color");
  CHECK(s.domain(0) == std::vector<std::string>{"blue", "green", "red"});
  CHECK(s.is_numeric(1));
  CHECK(s.target_name == "cls");
  CHECK(s.positive_label == "yes");
  CHECK(s.feature_index("age") == 1);
  CHECK(s.feature_index("absent") == -1);

  CHECK_THROWS_AS(parse_schema_text("feature a numeric\n"), DataError);  // no target
  CHECK_THROWS_AS(parse_schema_text("feature a numeric\nfeature a numeric\ntarget t positive p\n"),
                  DataError);
  CHECK_THROWS_AS(parse_schema_text("feature c categorical x,x\ntarget t positive p\n"),
                  DataError);
  CHECK_THROWS_AS(parse_schema_text("feature t numeric\ntarget t positive p\n"), DataError);
}

TEST_CASE("csv accepts header permutations and validates cells") {
  Dataset d = toy("c,t,a\nu,p,1\nv,q,2.5\n");
  REQUIRE(d.samples.size() == 2);
  CHECK(std::get<double>(d.samples[0].values[0]) == 1.0);
  CHECK(std::get<std::string>(d.samples[0].values[1]) == "u");
  CHECK(d.samples[0].label == 1);
  CHECK(d.samples[1].label == -1);
  CHECK(d.count_label(1) == 1);

  CHECK_THROWS_AS(toy("a,c\n1,u\n"), DataError);       // missing target column
  CHECK_THROWS_AS(toy("a,c,t,z\n1,u,p,0\n"), DataError);  // unexpected column
  CHECK_THROWS_AS(toy("a,c,t\n1,u\n"), DataError);     // short row
  CHECK_THROWS_AS(toy("a,c,t\nnan,u,p\n"), DataError);  // non-finite numeric
  CHECK_THROWS_AS(toy("a,c,t\n1,w,p\n"), DataError);   // token outside the domain

  try {
    toy("a,c,t\n1,u,p\n2,?,p\n");
    FAIL("missing value accepted");
  } catch (const DataError& e) {
    CHECK(e.row == 2);
    CHECK(e.column == "c");
  }
}

TEST_CASE("csv quoting follows rfc 4180") {
  Schema s = parse_schema_text(
      "feature c categorical \"x\nfeature n numeric\ntarget t positive p\n");
  // the quote is just a character in the domain token
  Dataset d = parse_csv("c,n,t\n\"\"\"x\",3,p\n", s);
  REQUIRE(d.samples.size() == 1);
  CHECK(std::get<std::string>(d.samples[0].values[0]) == "\"x");
  CHECK_THROWS_AS(parse_csv("c,n,t\n\"unterminated,3,p\n", s), DataError);
}

TEST_CASE("dataset round-trips through to_csv") {
  Dataset d = toy("a,c,t\n1.25,u,p\n-3,v,q\n0.1,u,q\n");
  Dataset back = parse_csv(to_csv(d), d.schema);
  REQUIRE(back.samples.size() == d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    CHECK(back.samples[i].label == d.samples[i].label);
    CHECK(back.samples[i].values == d.samples[i].values);
  }
  CHECK(parse_schema_text(schema_to_text(d.schema)).feature_names == d.schema.feature_names);
}

TEST_CASE("binarize standardizes numerics and one-hot encodes categoricals") {
  Dataset d = toy("a,c,t\n1,u,p\n2,v,q\n3,u,q\n");
  BinarizedMatrix m = binarize(d, true);
  REQUIRE(m.cols() == 3);
  CHECK(m.column_names == std::vector<std::string>{"a", "c_u", "c_v"});
  CHECK(m.column_map[0].domain_index == -1);
  CHECK(m.column_map[1].is_indicator());

  // mean 2, population std sqrt(2/3)
  CHECK(m.numeric_scaling[0].first == doctest::Approx(2.0));
  CHECK(m.numeric_scaling[0].second == doctest::Approx(0.816496580927726));
  CHECK(m.rows[0][0] == doctest::Approx(-1.224744871391589));
  CHECK(m.rows[1][0] == doctest::Approx(0.0));
  CHECK(m.rows[2][0] == doctest::Approx(1.224744871391589));
  CHECK(m.rows[0][1] == 1.0);
  CHECK(m.rows[0][2] == 0.0);
  CHECK(m.rows[1][2] == 1.0);
  CHECK(m.destandardize(0, m.rows[2][0]) == doctest::Approx(3.0));
  CHECK(m.warnings.empty());

  BinarizedMatrix raw = binarize(d, false);
  CHECK(raw.rows[2][0] == 3.0);
  CHECK(raw.numeric_scaling[0] == std::pair<double, double>{0.0, 1.0});
}

TEST_CASE("zero-variance numeric columns are flagged and left unscaled") {
  Dataset d = toy("a,c,t\n5,u,p\n5,v,q\n5,u,q\n");
  BinarizedMatrix m = binarize(d, true);
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0] == "a");
  CHECK(m.numeric_scaling[0].second == 1.0);
  CHECK(m.rows[0][0] == 0.0);  // centered only
}

TEST_CASE("binarize_sample matches the training rows") {
  Dataset d = toy("a,c,t\n1,u,p\n2,v,q\n3,u,q\n");
  BinarizedMatrix m = binarize(d, true);
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    auto row = binarize_sample(m, d.schema, d.samples[i]);
    REQUIRE(row.size() == m.rows[i].size());
    for (std::size_t c = 0; c < row.size(); ++c)
      CHECK(row[c] == doctest::Approx(m.rows[i][c]).epsilon(1e-12));
  }
}

TEST_CASE("split is stratified, deterministic, and a disjoint union") {
  std::string csv = "a,c,t\n";
  for (int i = 0; i < 40; ++i)
    csv += std::to_string(i) + ",u," + (i % 4 == 0 ? "p" : "q") + "\n";
  Dataset d = toy(csv);

  auto [train, test] = split(d, 0.25, 3);
  CHECK(train.samples.size() + test.samples.size() == 40);
  CHECK(test.count_label(1) + test.count_label(-1) == test.samples.size());
  // 10 positives, 30 negatives: expect about a quarter of each in test
  CHECK(test.count_label(1) >= 2);
  CHECK(test.count_label(1) <= 4);

  auto [train2, test2] = split(d, 0.25, 3);
  CHECK(test2.samples.size() == test.samples.size());
  for (std::size_t i = 0; i < test.samples.size(); ++i)
    CHECK(test2.samples[i].values == test.samples[i].values);

  auto [train3, test3] = split(d, 0.25, 4);
  bool same = test3.samples.size() == test.samples.size();
  if (same)
    for (std::size_t i = 0; i < test.samples.size(); ++i)
      same = same && test3.samples[i].values == test.samples[i].values;
  CHECK_FALSE(same);

  CHECK_THROWS_AS(split(d, 0.0, 1), DataError);
  CHECK_THROWS_AS(split(toy("a,c,t\n1,u,p\n2,u,q\n3,u,q\n"), 0.5, 1), DataError);
}

TEST_CASE("double formatting round-trips and trims") {
  CHECK(format_double_trimmed(16.1, 2) == "16.1");
  CHECK(format_double_trimmed(106.0, 2) == "106");
  CHECK(format_double_trimmed(1.0, 2) == "1");
  CHECK(format_double_trimmed(-0.004, 2) == "0");
  CHECK(format_double_trimmed(12.345, 2) == "12.35");

  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, -2.5}) {
    double back;
    REQUIRE(parse_double(format_double_roundtrip(v), back));
    CHECK(back == v);
  }
}

TEST_CASE("heart dataset loads with the expected shape") {
  Dataset d = load_csv(std::string(SHAPFOIL_DATA_DIR) + "/heart.csv",
                       std::string(SHAPFOIL_DATA_DIR) + "/heart.schema");
  CHECK(d.samples.size() == 297);
  CHECK(d.count_label(1) + d.count_label(-1) == 297);
  BinarizedMatrix m = binarize(d, true);
  CHECK(m.cols() == 28);
}
