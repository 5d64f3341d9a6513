#include <doctest.h>

#include <stdexcept>

#include "shapfoil/eval.hpp"
#include "shapfoil/manifest.hpp"
#include "shapfoil/strings.hpp"
#include "shapfoil/synth.hpp"

using namespace shapfoil;

TEST_CASE("confusion metrics use the standard conventions") {
  EvalReport r = report_from_confusion(3, 1, 4, 2);
  CHECK(r.precision == doctest::Approx(0.75));
  CHECK(r.recall == doctest::Approx(0.6));
  CHECK(r.accuracy == doctest::Approx(0.7));
  CHECK(r.f1 == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35));

  EvalReport z = report_from_confusion(0, 0, 5, 0);
  CHECK(z.precision == 0.0);
  CHECK(z.recall == 0.0);
  CHECK(z.f1 == 0.0);
  CHECK(z.accuracy == 1.0);
}

TEST_CASE("hypothesis evaluation counts the confusion directly") {
  Schema s = parse_schema_text("feature x numeric\ntarget t positive p\n");
  Dataset d = parse_csv("x,t\n1,p\n2,p\n3,q\n9,q\n10,p\n", s);
  Hypothesis h;
  h.clauses.push_back({"p", {NumRange{"x", 0.0, 3.0}}});
  EvalReport r = evaluate_hypothesis(h, d);
  CHECK(r.tp == 2);
  CHECK(r.fp == 1);
  CHECK(r.tn == 1);
  CHECK(r.fn == 1);
  REQUIRE(r.program_size.has_value());
  CHECK(r.program_size->clauses == 1);
}

TEST_CASE("model evaluation and fidelity share the preprocessing") {
  Dataset d = synthetic_dataset("clusters3", 8, 100);
  BinarizedMatrix bin = binarize(d, true);
  std::vector<int> y;
  for (const Sample& s : d.samples) y.push_back(s.label);
  Hyperparams hp;
  hp.kernel = RbfKernel{5.0};
  hp.C = 1.0;
  SvmModel m = train(bin.rows, y, hp);

  EvalReport svm_rep = evaluate_model(m, bin, d);
  CHECK(svm_rep.tp + svm_rep.fp + svm_rep.tn + svm_rep.fn == d.samples.size());
  CHECK(svm_rep.accuracy > 0.8);
  CHECK_FALSE(svm_rep.fidelity.has_value());

  Hypothesis h;
  h.clauses.push_back({"red", {}});  // always-positive rules
  EvalReport fid = evaluate_with_fidelity(h, m, bin, d);
  REQUIRE(fid.fidelity.has_value());
  // agreement with the model is exactly its positive-prediction rate
  double pos_rate = static_cast<double>(svm_rep.tp + svm_rep.fp) / d.samples.size();
  CHECK(*fid.fidelity == doctest::Approx(pos_rate));
  CHECK(fid.recall == 1.0);
}

TEST_CASE("program size reflects the serialized form") {
  Hypothesis h;
  h.clauses.push_back({"red", {NumRange{"f1", 0.0, 1.0}, CatEq{"c", "a"}}});
  h.clauses.push_back({"red", {NegCatEq{"c", "b"}}});
  ProgramSize ps = program_size(h);
  CHECK(ps.clauses == 2);
  CHECK(ps.literals == 3);
  CHECK(ps.lines == 2);
}

TEST_CASE("comparison tables render both formats") {
  EvalReport a = report_from_confusion(8, 2, 7, 3);
  a.program_size = ProgramSize{3, 7, 3};
  EvalReport b = report_from_confusion(9, 1, 8, 2);
  std::string text = compare_report({{"shap-foil", a}, {"foil", b}}, ReportFormat::Text);
  CHECK(text.find("shap-foil") != std::string::npos);
  CHECK(text.find("foil") != std::string::npos);
  CHECK(text.find("f1") != std::string::npos);

  std::string csv = compare_report({{"shap-foil", a}, {"foil", b}}, ReportFormat::Csv);
  CHECK(csv.find("shap-foil,") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 3);
}

TEST_CASE("manifests render sorted and round-trip") {
  RunManifest m;
  m.set("seed", std::uint64_t{42});
  m.set("theta", 0.85);
  m.set("command", "induce");
  std::string text = m.to_text();
  CHECK(text == "command=induce\nseed=42\ntheta=0.85\n");

  RunManifest back = RunManifest::from_text("# comment\n" + text + "\n");
  CHECK(back.get("seed") == "42");
  CHECK(back.get("theta") == "0.85");
  CHECK(back.has("command"));
  CHECK_FALSE(back.has("threads"));
  CHECK_THROWS_AS(back.get("missing"), std::out_of_range);
  CHECK_THROWS_AS(RunManifest::from_text("no equals sign\n"), std::runtime_error);
}

TEST_CASE("content hashes match the fnv-1a reference values") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("abc") == "e71fa2190541574b");
  CHECK(content_hash("abc") != content_hash("abd"));
}

TEST_CASE("synthetic generators are byte-deterministic") {
  SynthFiles a = generate_synthetic("clusters3", 42, 200);
  SynthFiles b = generate_synthetic("clusters3", 42, 200);
  CHECK(a.csv == b.csv);
  CHECK(a.schema == b.schema);
  CHECK(generate_synthetic("clusters3", 43, 200).csv != a.csv);
  CHECK_THROWS_AS(generate_synthetic("spiral", 1, 10), DataError);

  Dataset d = synthetic_dataset("clusters3", 42, 200);
  CHECK(d.samples.size() == 200);
  CHECK(d.schema.positive_label == "red");
  CHECK(d.count_label(1) + d.count_label(-1) == 200);
  CHECK(d.count_label(-1) >= 6);

  Dataset n = synthetic_dataset("nested", 7, 200);
  CHECK(n.samples.size() == 200);
  CHECK(n.count_label(-1) == 50);  // a quarter of the points sit in the pocket

  SynthFiles x = generate_synthetic("xor4", 1, 40);
  CHECK(x.csv.rfind("f1,f2,class\n0,0,pos\n1,1,pos\n0,1,neg\n1,0,neg\n", 0) == 0);
}
