#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapfoil/dataset.hpp"
#include "shapfoil/logic.hpp"
#include "shapfoil/svm.hpp"

namespace shapfoil {

struct ProgramSize {
  std::size_t clauses = 0;
  std::size_t literals = 0;
  std::size_t lines = 0;  // serialized line count
};

struct EvalReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0, recall = 0, accuracy = 0, f1 = 0;
  /// Agreement rate with the SVM's predictions; set only when both a
  /// hypothesis and a model were evaluated together.
  std::optional<double> fidelity;
  std::optional<ProgramSize> program_size;
};

/// Fills in the derived metrics from the confusion counts, with the
/// zero-denominator conventions precision=0, recall=0, f1=0.
EvalReport report_from_confusion(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

EvalReport evaluate_hypothesis(const Hypothesis& h, const Dataset& test);

/// Evaluates the SVM on test samples mapped through the model's recorded
/// binarization/scaling.
EvalReport evaluate_model(const SvmModel& m, const BinarizedMatrix& preprocessing,
                          const Dataset& test);

/// Hypothesis metrics plus fidelity against the model's predictions.
EvalReport evaluate_with_fidelity(const Hypothesis& h, const SvmModel& m,
                                  const BinarizedMatrix& preprocessing, const Dataset& test);

ProgramSize program_size(const Hypothesis& h, int rounding = 2);

enum class ReportFormat { Text, Csv };

/// Side-by-side metric table for labeled reports, plus a second table of
/// program sizes for entries that have one.
std::string compare_report(const std::vector<std::pair<std::string, EvalReport>>& reports,
                           ReportFormat format);

}  // namespace shapfoil
