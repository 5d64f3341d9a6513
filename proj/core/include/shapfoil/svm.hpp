#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace shapfoil {

struct BinarizedMatrix;

class SvmError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearKernel {};
struct PolynomialKernel {
  int degree = 3;
  double gamma = 1.0;
  double coef0 = 0.0;
};
struct RbfKernel {
  double gamma = 1.0;
};
using KernelSpec = std::variant<LinearKernel, PolynomialKernel, RbfKernel>;

std::string kernel_to_string(const KernelSpec& k);
KernelSpec kernel_from_string(const std::string& s);

/// Linear: x.z; Polynomial: (gamma x.z + coef0)^degree; Rbf: exp(-gamma |x-z|^2).
double kernel_eval(const KernelSpec& k, std::span<const double> x, std::span<const double> z);

struct Hyperparams {
  double C = 1.0;
  KernelSpec kernel = RbfKernel{1.0};
  double kkt_tolerance = 1e-3;
  int max_passes = 10000;
  std::uint64_t seed = 0;
};

/// Trained soft-margin kernel SVM. Only points with alpha above the numeric
/// cutoff are stored.
struct SvmModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<int> sv_labels;      // +1 / -1
  std::vector<double> alphas;      // in (0, C]
  double bias = 0.0;
  KernelSpec kernel;
  std::vector<int> sv_original_indices;  // rows of the training matrix

  std::size_t dim() const {
    return support_vectors.empty() ? 0 : support_vectors[0].size();
  }
};

/// Solves the dual with an SMO solver (two-alpha working sets, KKT-violation
/// selection). Deterministic for a fixed seed. Throws SvmError on single-class
/// input or non-convergence within max_passes.
SvmModel train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
               const Hyperparams& h);

/// Pre-sign decision value: sum_i alpha_i y_i K(x_i, x) + bias.
double decision_value(const SvmModel& m, std::span<const double> x);

/// Sign of the decision value; exact zero maps to +1.
int classify(const SvmModel& m, std::span<const double> x);

/// Contribution of one support vector: alpha_i y_i K(x_i, x).
double similarity(const SvmModel& m, std::size_t sv_index, std::span<const double> x);

/// Model-space indices of support vectors whose training label is +1 and whose
/// model classification is +1.
std::vector<int> true_positive_svs(const SvmModel& m);

/// Dual objective of a full alpha vector (used by tests and diagnostics):
/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j).
double dual_objective(const KernelSpec& k, const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const std::vector<double>& alpha);

/// Versioned plain-text serialization, round-trippable for 17-significant-digit
/// decimals. Includes the binarization column map/scaling when provided so a
/// saved model can classify raw CSV rows.
std::string model_to_text(const SvmModel& m, const BinarizedMatrix* preprocessing = nullptr);
SvmModel model_from_text(const std::string& text, BinarizedMatrix* preprocessing = nullptr);

/// Seeded k-fold grid search over C in {0.1,1,10,100} and gamma in {1/d, 0.1, 1}
/// (degree fixed for polynomial). Returns the hyperparameters with the best
/// cross-validated accuracy; ties resolved by enumeration order.
Hyperparams grid_search(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                        const KernelSpec& kernel_family, int folds, std::uint64_t seed,
                        int threads = 1);

}  // namespace shapfoil
