#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapfoil/svm.hpp"

namespace shapfoil {

struct Dataset;
struct BinarizedMatrix;

class ShapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ShapModeKind { Marginalize, Retrain };

struct ShapOptions {
  ShapModeKind mode = ShapModeKind::Marginalize;
  int exact_limit = 12;        // subset-enumeration cap (10 in Retrain mode)
  int n_permutations = 200;    // sampled fallback above the cap
  std::uint64_t seed = 0;
  std::size_t background_limit = 0;  // 0 = full training set as background
  int threads = 1;
};

/// Attributions for the pre-sign decision value. In exact Marginalize mode
/// each phi row sums to f(x) - base_value.
struct ShapResult {
  double base_value = 0.0;
  std::vector<int> row_indices;            // training-matrix rows explained
  std::vector<std::vector<double>> phi;    // one row per requested index
  std::string mode;                        // "marginalize" | "marginalize-sampled" | "retrain"
  std::string model_output = "decision_value";
};

/// Exact Shapley values of an arbitrary set-value function over d players,
/// with the combinatorial weights |S|!(d-|S|-1)!/d!. The engine behind both
/// modes; also used directly by tests with hand-built value functions.
std::vector<double> shapley_exact_fn(const std::function<double(const std::vector<bool>&)>& value,
                                     int d);

/// Exact Shapley row in Marginalize mode: a feature outside S is replaced by
/// background values and the model output averaged. Throws when d exceeds
/// exact_limit.
std::vector<double> shapley_exact(const SvmModel& m, const std::vector<std::vector<double>>& X,
                                  std::size_t sample_index,
                                  const std::vector<std::vector<double>>& background,
                                  int exact_limit = 12);

/// Exact Shapley row in Retrain mode: the model is retrained on each feature
/// subset. f over the empty subset is the alpha-weighted label mean of the
/// full model.
std::vector<double> shapley_exact_retrain(const std::vector<std::vector<double>>& X,
                                          const std::vector<int>& y, const Hyperparams& h,
                                          std::size_t sample_index, int exact_limit = 10);

/// Seeded permutation-sampling estimate (Marginalize only). Deterministic per
/// seed; equals the exact row when the permutations enumerate all d! orders.
std::vector<double> shapley_sampled(const SvmModel& m, const std::vector<std::vector<double>>& X,
                                    std::size_t sample_index,
                                    const std::vector<std::vector<double>>& background,
                                    int n_permutations, std::uint64_t seed);

/// Shapley matrix for the requested training rows. Picks exact vs sampled per
/// the options; base_value is shared across rows. y is only needed for
/// Retrain mode (pass empty otherwise).
ShapResult shap_matrix(const SvmModel& m, const std::vector<std::vector<double>>& X,
                       const std::vector<int>& rows, const ShapOptions& opts,
                       const std::vector<int>& y = {});

/// Textual attribution listing for one explained row: base value, model
/// output, then nonzero contributions sorted by signed phi descending (ties
/// by column index), each tagged with its push direction.
std::string attribution_report(const ShapResult& result, std::size_t pos,
                               const BinarizedMatrix& columns, const Dataset& d);

/// CSV rendering of the phi matrix: a "# base_value ..." metadata line, a
/// header of binarized column names, one row per explained sample.
std::string shap_matrix_to_csv(const ShapResult& result,
                               const std::vector<std::string>& column_names);

}  // namespace shapfoil
