#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shapfoil/dataset.hpp"
#include "shapfoil/logic.hpp"
#include "shapfoil/shap.hpp"
#include "shapfoil/svm.hpp"

namespace shapfoil {

/// Support-vector index (model space) -> sample indices annotated to it.
/// The lists partition the remaining samples.
using SimMap = std::map<int, std::vector<int>>;

struct ShapFoilParams {
  double theta = 0.85;     // clause purity threshold
  int max_literals = 8;
  ShapOptions shap;
  std::uint64_t seed = 0;
};

/// Assigns every sample to the support vector in S maximizing
/// alpha_i y_i K(x_i, x); ties go to the lowest sv index.
SimMap annotate_samples(const SvmModel& m, const std::vector<int>& S,
                        const std::vector<int>& sample_indices,
                        const std::vector<std::vector<double>>& X);

/// The sv with the longest annotation list; ties to the lowest sv index.
int select_support_vector(const SimMap& sim_map, const std::vector<int>& S);

/// Clause body candidates for one support vector, in descending order of its
/// positive Shapley values. Indicator columns become CatEq / NegCatEq
/// (negation-as-failure for a zero indicator); a numeric column becomes the
/// min/max interval of that feature over the samples annotated to the sv, in
/// original units. Throws NoExplainingFeatures when no column has phi > 0.
class NoExplainingFeatures : public LogicError {
public:
  NoExplainingFeatures() : LogicError("support vector has no positive-phi feature") {}
};
std::vector<Literal> build_literals_for_sv(const std::vector<double>& sv_binarized_row,
                                           const std::vector<double>& shap_row,
                                           const BinarizedMatrix& columns, const Dataset& d,
                                           const std::vector<int>& associated_samples);
std::vector<Literal> build_literals_for_sv(const std::vector<double>& sv_binarized_row,
                                           const std::vector<double>& shap_row,
                                           const BinarizedMatrix& columns, const Dataset& d,
                                           const std::vector<int>& associated_samples,
                                           std::vector<int>* phi_order_out);

/// Adds literals in the given order, stopping at the first prefix whose
/// precision on the remaining samples reaches theta. nullopt = rejected
/// (precision never reached theta, or no positive coverage).
std::optional<Clause> specialize(const std::vector<Literal>& literals, const Dataset& d,
                                 const std::vector<int>& remaining, double theta,
                                 int max_literals, const std::string& head);

struct ShapFoilAudit {
  int sv_index = -1;           // model-space sv
  int sv_train_row = -1;       // training-matrix row
  std::size_t pulled = 0;      // annotation list length when selected
  std::vector<int> phi_order;  // binarized columns in the order used
  bool accepted = false;
  std::string reject_reason;
  double precision = 0.0;
  std::size_t covered_pos = 0, covered_neg = 0;
};

struct ShapFoilResult {
  Hypothesis hypothesis;
  std::vector<ShapFoilAudit> audits;
};

/// Model-dependent sequential covering: annotate remaining samples to the
/// remaining TP support vectors, take the sv pulling the most samples,
/// specialize a clause from its Shapley ordering, accept it when pure enough,
/// drop covered positives, and always retire the sv.
ShapFoilResult shap_foil(const SvmModel& m, const Dataset& d, const BinarizedMatrix& bin,
                         const ShapFoilParams& params);

/// Runs shap_foil for the positive class, then flips labels, retrains via the
/// supplied trainer, and runs again for the other class.
std::pair<ShapFoilResult, ShapFoilResult> induce_both_classes(
    const std::function<SvmModel(const std::vector<std::vector<double>>&,
                                 const std::vector<int>&)>& trainer,
    const Dataset& d, const BinarizedMatrix& bin, const ShapFoilParams& params);

}  // namespace shapfoil
