#include <doctest.h>

#include <cmath>
#include <random>

#include "shapfoil/dataset.hpp"
#include "shapfoil/svm.hpp"
#include "shapfoil/synth.hpp"
#include "support.hpp"

using namespace shapfoil;

TEST_CASE("kernel evaluation matches closed forms") {
  std::vector<double> x{1.0, 2.0}, z{3.0, -1.0};
  CHECK(kernel_eval(LinearKernel{}, x, z) == doctest::Approx(1.0));
  CHECK(kernel_eval(PolynomialKernel{2, 0.5, 1.0}, x, z) == doctest::Approx(2.25));
  CHECK(kernel_eval(PolynomialKernel{3, 1.0, 0.0}, x, z) == doctest::Approx(1.0));

  std::vector<double> o{0.0, 0.0}, e{1.0, 1.0};
  CHECK(kernel_eval(RbfKernel{1.0}, o, e) == doctest::Approx(0.1353352832366127).epsilon(1e-12));
  CHECK(kernel_eval(RbfKernel{2.0}, o, o) == 1.0);
}

TEST_CASE("kernel specs round-trip through strings") {
  for (const KernelSpec& k :
       {KernelSpec{LinearKernel{}}, KernelSpec{PolynomialKernel{4, 0.25, 1.5}},
        KernelSpec{RbfKernel{0.7}}}) {
    KernelSpec back = kernel_from_string(kernel_to_string(k));
    CHECK(kernel_to_string(back) == kernel_to_string(k));
  }
  CHECK_THROWS_AS(kernel_from_string("sigmoid"), SvmError);
}

TEST_CASE("two separable points put the boundary at the midpoint") {
  std::vector<std::vector<double>> X{{0.0}, {2.0}};
  std::vector<int> y{-1, +1};
  Hyperparams h;
  h.kernel = LinearKernel{};
  h.C = 10.0;
  SvmModel m = train(X, y, h);

  REQUIRE(m.alphas.size() == 2);
  CHECK(m.alphas[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.alphas[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.bias == doctest::Approx(-1.0).epsilon(1e-6));
  std::vector<double> mid{1.0}, lo{0.5}, hi{1.5};
  CHECK(decision_value(m, mid) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(classify(m, lo) == -1);
  CHECK(classify(m, hi) == +1);

  std::vector<double> alpha{m.alphas[0], m.alphas[1]};
  CHECK(dual_objective(h.kernel, X, y, alpha) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("rbf separates xor where linear cannot") {
  Dataset d = synthetic_dataset("xor4", 1, 40);
  BinarizedMatrix bin = binarize(d, false);
  std::vector<int> y;
  for (const Sample& s : d.samples) y.push_back(s.label);

  Hyperparams rbf;
  rbf.kernel = RbfKernel{5.0};
  rbf.C = 10.0;
  SvmModel mr = train(bin.rows, y, rbf);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < bin.rows.size(); ++i)
    if (classify(mr, bin.rows[i]) == y[i]) ++correct;
  CHECK(correct == bin.rows.size());

  Hyperparams lin;
  lin.kernel = LinearKernel{};
  lin.C = 1.0;
  SvmModel ml = train(bin.rows, y, lin);
  std::size_t lin_correct = 0;
  for (std::size_t i = 0; i < bin.rows.size(); ++i)
    if (classify(ml, bin.rows[i]) == y[i]) ++lin_correct;
  CHECK(lin_correct < bin.rows.size());
}

TEST_CASE("training rejects single-class input") {
  std::vector<std::vector<double>> X{{0.0}, {1.0}};
  std::vector<int> y{1, 1};
  CHECK_THROWS_AS(train(X, y, Hyperparams{}), SvmError);
}

TEST_CASE("smo matches the projected-gradient oracle on random problems") {
  // A fast slice of the full acceptance sweep.
  const KernelSpec kernels[3] = {LinearKernel{}, PolynomialKernel{2, 0.5, 1.0}, RbfKernel{0.7}};
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    std::mt19937_64 rng(seed * 7919 + 13);
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    testsupport::random_problem(rng, X, y);

    Hyperparams h;
    h.kernel = kernels[seed % 3];
    h.C = (seed % 2) ? 2.0 : 0.5;
    h.kkt_tolerance = 1e-5;
    SvmModel m = train(X, y, h);

    std::vector<double> alpha(X.size(), 0.0);
    for (std::size_t k = 0; k < m.sv_original_indices.size(); ++k) {
      alpha[m.sv_original_indices[k]] = m.alphas[k];
      CHECK(m.alphas[k] > 0.0);
      CHECK(m.alphas[k] <= h.C + 1e-9);
    }
    double ysum = 0;
    for (std::size_t i = 0; i < X.size(); ++i) ysum += y[i] * alpha[i];
    CHECK(std::abs(ysum) < 1e-8);

    double w_smo = dual_objective(h.kernel, X, y, alpha);
    double w_pgd = testsupport::pgd_dual_max(h.kernel, X, y, h.C);
    CHECK(std::abs(w_pgd - w_smo) <= 1e-4 * std::max(1.0, std::abs(w_pgd)));
  }
}

TEST_CASE("similarity terms sum to the decision value") {
  Dataset d = synthetic_dataset("clusters3", 5, 60);
  BinarizedMatrix bin = binarize(d, true);
  std::vector<int> y;
  for (const Sample& s : d.samples) y.push_back(s.label);
  Hyperparams h;
  h.kernel = RbfKernel{1.0};
  SvmModel m = train(bin.rows, y, h);

  const auto& x = bin.rows[0];
  double sum = m.bias;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) sum += similarity(m, i, x);
  CHECK(sum == doctest::Approx(decision_value(m, x)).epsilon(1e-10));

  for (int sv : true_positive_svs(m)) {
    CHECK(m.sv_labels[sv] == 1);
    CHECK(classify(m, m.support_vectors[sv]) == 1);
  }
}

TEST_CASE("model text round-trips exactly, including preprocessing") {
  Dataset d = synthetic_dataset("nested", 2, 50);
  BinarizedMatrix bin = binarize(d, true);
  std::vector<int> y;
  for (const Sample& s : d.samples) y.push_back(s.label);
  Hyperparams h;
  h.kernel = PolynomialKernel{3, 0.2, 1.0};
  SvmModel m = train(bin.rows, y, h);

  std::string text = model_to_text(m, &bin);
  BinarizedMatrix bin2;
  SvmModel m2 = model_from_text(text, &bin2);
  CHECK(m2.alphas == m.alphas);
  CHECK(m2.bias == m.bias);
  CHECK(m2.support_vectors == m.support_vectors);
  CHECK(m2.sv_labels == m.sv_labels);
  CHECK(m2.sv_original_indices == m.sv_original_indices);
  CHECK(kernel_to_string(m2.kernel) == kernel_to_string(m.kernel));
  CHECK(bin2.column_names == bin.column_names);
  CHECK(bin2.numeric_scaling == bin.numeric_scaling);
  CHECK(model_to_text(m2, &bin2) == text);
}

TEST_CASE("grid search returns grid members and is deterministic") {
  Dataset d = synthetic_dataset("clusters3", 9, 80);
  BinarizedMatrix bin = binarize(d, true);
  std::vector<int> y;
  for (const Sample& s : d.samples) y.push_back(s.label);

  Hyperparams best = grid_search(bin.rows, y, RbfKernel{}, 3, 11);
  bool c_ok = best.C == 0.1 || best.C == 1.0 || best.C == 10.0 || best.C == 100.0;
  CHECK(c_ok);
  double g = std::get<RbfKernel>(best.kernel).gamma;
  double inv_d = 1.0 / static_cast<double>(bin.cols());
  CHECK((g == inv_d || g == 0.1 || g == 1.0));

  Hyperparams again = grid_search(bin.rows, y, RbfKernel{}, 3, 11, 4);
  CHECK(again.C == best.C);
  CHECK(std::get<RbfKernel>(again.kernel).gamma == g);
}
