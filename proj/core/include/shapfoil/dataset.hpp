#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shapfoil {

/// Error raised by loading/validation, carrying a 1-based row and the column
/// name when they are known (row 0 means "not row specific").
class DataError : public std::runtime_error {
public:
  DataError(std::string msg, std::size_t row = 0, std::string column = "")
      : std::runtime_error(std::move(msg)), row(row), column(std::move(column)) {}
  std::size_t row;
  std::string column;
};

struct CategoricalKind {
  std::vector<std::string> domain;  // non-empty, duplicate-free, sorted lexicographically
};
struct NumericKind {};
using FeatureKind = std::variant<CategoricalKind, NumericKind>;

struct Schema {
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> kinds;  // one per feature
  std::string target_name;
  std::string positive_label;

  int feature_index(const std::string& name) const;  // -1 if absent
  bool is_numeric(std::size_t feature) const {
    return std::holds_alternative<NumericKind>(kinds[feature]);
  }
  const std::vector<std::string>& domain(std::size_t feature) const {
    return std::get<CategoricalKind>(kinds[feature]).domain;
  }
};

/// One categorical token or one finite real, per schema feature.
using Value = std::variant<std::string, double>;

struct Sample {
  std::vector<Value> values;
  int label;  // +1 or -1
};

struct Dataset {
  Schema schema;
  std::vector<Sample> samples;

  std::size_t count_label(int label) const;
};

/// Identifies what a binarized column encodes: an indicator for one
/// (categorical feature, domain value) pair, or a numeric passthrough
/// (domain_index == -1).
struct ColumnRef {
  int feature;
  int domain_index;
  bool is_indicator() const { return domain_index >= 0; }
};

struct BinarizedMatrix {
  std::vector<std::vector<double>> rows;
  std::vector<ColumnRef> column_map;
  std::vector<std::string> column_names;  // e.g. "chest_pain_4", "age"
  /// Per column (mean, std) applied during standardization; identity (0, 1)
  /// for indicator columns and when standardization was off.
  std::vector<std::pair<double, double>> numeric_scaling;
  /// Names of zero-variance numeric columns left unscaled.
  std::vector<std::string> warnings;

  std::size_t cols() const { return column_map.size(); }
  /// Maps a standardized coordinate back to original units.
  double destandardize(std::size_t col, double v) const {
    return v * numeric_scaling[col].second + numeric_scaling[col].first;
  }
};

/// Parses the line-oriented schema sidecar:
///   feature <name> categorical <v1,v2,...>
///   feature <name> numeric
///   target <name> positive <token>
/// Categorical domains are re-sorted lexicographically regardless of file order.
Schema load_schema(const std::string& path);
Schema parse_schema_text(const std::string& text);

/// Loads an RFC-4180 CSV whose header is a permutation of the schema's
/// feature names plus the target. Every cell is validated; errors carry
/// row/column positions.
Dataset load_csv(const std::string& csv_path, const std::string& schema_path);
Dataset parse_csv(const std::string& csv_text, const Schema& schema);

/// Serializes back to CSV (header in schema order); load_csv of the output
/// reproduces the Dataset exactly.
std::string to_csv(const Dataset& d);
void save_csv(const Dataset& d, const std::string& path);
std::string schema_to_text(const Schema& s);
void save_schema(const Schema& s, const std::string& path);

/// One-hot encodes categoricals and (optionally) standardizes numeric columns
/// to zero mean / unit variance (population std). Zero-variance numeric
/// columns are left unscaled with std recorded as 1 and a warning emitted.
BinarizedMatrix binarize(const Dataset& d, bool standardize_numeric);

/// Projects a single sample onto an existing matrix's columns, reusing its
/// recorded scaling. Used to map test samples into a trained model's space.
std::vector<double> binarize_sample(const BinarizedMatrix& ref, const Schema& schema,
                                    const Sample& s);

/// Deterministic stratified split. test_fraction in (0,1); each class needs
/// at least 2 members.
std::pair<Dataset, Dataset> split(const Dataset& d, double test_fraction, std::uint64_t seed);

}  // namespace shapfoil
