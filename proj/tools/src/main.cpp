// shapfoil command-line front end. Each subcommand is a self-contained stage
// communicating with the others through files (model, rules, phi matrix), and
// every run drops a RunManifest next to its outputs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapfoil/dataset.hpp"
#include "shapfoil/eval.hpp"
#include "shapfoil/foil.hpp"
#include "shapfoil/logic.hpp"
#include "shapfoil/manifest.hpp"
#include "shapfoil/shap.hpp"
#include "shapfoil/shapfoil.hpp"
#include "shapfoil/strings.hpp"
#include "shapfoil/svm.hpp"
#include "shapfoil/synth.hpp"

namespace fs = std::filesystem;
using namespace shapfoil;

namespace {

constexpr const char* kToolVersion = "0.1.0";

/// Optional key=value defaults file named by SHAPFOIL_CONFIG. Values are used
/// only for flags the user did not pass on the command line.
std::map<std::string, std::string> load_config_defaults() {
  std::map<std::string, std::string> defaults;
  const char* path = std::getenv("SHAPFOIL_CONFIG");
  if (!path || !*path) return defaults;
  RunManifest cfg = RunManifest::load(path);
  for (const char* key : {"seed", "theta", "threads", "kernel", "C"})
    if (cfg.has(key)) defaults[key] = cfg.get(key);
  return defaults;
}

struct CommonOpts {
  std::string out = "out";
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "Output directory (created if missing)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--threads", o.threads, "Worker threads (default 1 for determinism baselines)")
      ->check(CLI::Range(1, 256));
}

void apply_config_defaults(CLI::App* cmd, const std::map<std::string, std::string>& cfg) {
  for (const auto& [key, value] : cfg) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt && opt->empty()) opt->add_result(value);
  }
}

fs::path ensure_out(const CommonOpts& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

struct KernelOpts {
  std::string kernel = "rbf";
  double C = 1.0;
  double gamma = 0.0;  // 0 = 1/d default
  int degree = 3;
  double coef0 = 0.0;
  bool grid_search = false;
  int folds = 5;
};

void add_kernel_flags(CLI::App* cmd, KernelOpts& k) {
  cmd->add_option("--kernel", k.kernel, "Kernel family: linear, poly, rbf")
      ->check(CLI::IsMember({"linear", "poly", "rbf"}));
  cmd->add_option("--C", k.C, "Soft-margin penalty")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", k.gamma, "Kernel gamma (0 = 1/n_columns)");
  cmd->add_option("--degree", k.degree, "Polynomial degree")->check(CLI::Range(1, 10));
  cmd->add_option("--coef0", k.coef0, "Polynomial coef0");
  cmd->add_flag("--grid-search", k.grid_search,
                "Cross-validated search over C and gamma within the chosen family");
  cmd->add_option("--folds", k.folds, "Grid-search folds")->check(CLI::Range(2, 20));
}

KernelSpec resolve_kernel(const KernelOpts& k, std::size_t n_cols) {
  double gamma = k.gamma > 0 ? k.gamma : 1.0 / static_cast<double>(n_cols);
  if (k.kernel == "linear") return LinearKernel{};
  if (k.kernel == "poly") return PolynomialKernel{k.degree, gamma, k.coef0};
  return RbfKernel{gamma};
}

struct TrainedModel {
  SvmModel model;
  BinarizedMatrix bin;
  Hyperparams hp;
};

TrainedModel train_on(const Dataset& d, const KernelOpts& k, const CommonOpts& common) {
  TrainedModel t;
  t.bin = binarize(d, true);
  for (const std::string& w : t.bin.warnings)
    std::cerr << "warning: zero-variance column '" << w << "' left unscaled\n";
  std::vector<int> y;
  y.reserve(d.samples.size());
  for (const Sample& s : d.samples) y.push_back(s.label);

  t.hp.C = k.C;
  t.hp.kernel = resolve_kernel(k, t.bin.cols());
  t.hp.seed = common.seed;
  if (k.grid_search)
    t.hp = grid_search(t.bin.rows, y, t.hp.kernel, k.folds, common.seed, common.threads);
  t.model = train(t.bin.rows, y, t.hp);
  return t;
}

void manifest_common(RunManifest& m, const std::string& command, const CommonOpts& common) {
  m.set("command", command);
  m.set("tool_version", std::string(kToolVersion));
  m.set("seed", common.seed);
  // threads is deliberately absent: outputs must not depend on it.
}

void manifest_data(RunManifest& m, const std::string& data, const std::string& schema) {
  m.set("data", data);
  m.set("data_hash", file_hash(data));
  m.set("schema", schema);
  m.set("schema_hash", file_hash(schema));
}

void manifest_hyperparams(RunManifest& m, const Hyperparams& hp, bool grid_searched) {
  m.set("svm.C", hp.C);
  m.set("svm.kernel", kernel_to_string(hp.kernel));
  m.set("svm.kkt_tolerance", hp.kkt_tolerance);
  m.set("svm.grid_search", std::string(grid_searched ? "true" : "false"));
}

struct ShapFlagOpts {
  std::string mode = "marginalize";
  int permutations = 200;
  int exact_limit = 12;
  std::size_t background = 0;
};

void add_shap_flags(CLI::App* cmd, ShapFlagOpts& s) {
  cmd->add_option("--shap-mode", s.mode, "Shapley mode: marginalize or retrain")
      ->check(CLI::IsMember({"marginalize", "retrain"}));
  cmd->add_option("--permutations", s.permutations,
                  "Sampled permutations when dimension exceeds the exact limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--exact-limit", s.exact_limit, "Max dimension for exact enumeration")
      ->check(CLI::Range(1, 20));
  cmd->add_option("--background", s.background,
                  "Background subsample size for marginalization (0 = full training set)");
}

ShapOptions resolve_shap(const ShapFlagOpts& s, const CommonOpts& common) {
  ShapOptions o;
  o.mode = s.mode == "retrain" ? ShapModeKind::Retrain : ShapModeKind::Marginalize;
  o.exact_limit = s.mode == "retrain" ? std::min(s.exact_limit, 10) : s.exact_limit;
  o.n_permutations = s.permutations;
  o.seed = common.seed;
  o.background_limit = s.background;
  o.threads = common.threads;
  return o;
}

void manifest_shap(RunManifest& m, const ShapOptions& o) {
  m.set("shap.mode", std::string(o.mode == ShapModeKind::Retrain ? "retrain" : "marginalize"));
  m.set("shap.exact_limit", static_cast<std::int64_t>(o.exact_limit));
  m.set("shap.permutations", static_cast<std::int64_t>(o.n_permutations));
  m.set("shap.background", static_cast<std::uint64_t>(o.background_limit));
}

std::string report_text(const EvalReport& r) {
  std::ostringstream out;
  out << "tp=" << r.tp << " fp=" << r.fp << " tn=" << r.tn << " fn=" << r.fn << '\n';
  out << "precision=" << format_double_trimmed(r.precision, 4)
      << " recall=" << format_double_trimmed(r.recall, 4)
      << " accuracy=" << format_double_trimmed(r.accuracy, 4)
      << " f1=" << format_double_trimmed(r.f1, 4) << '\n';
  if (r.fidelity) out << "fidelity=" << format_double_trimmed(*r.fidelity, 4) << '\n';
  if (r.program_size)
    out << "clauses=" << r.program_size->clauses << " literals=" << r.program_size->literals
        << " lines=" << r.program_size->lines << '\n';
  return out.str();
}

std::string audit_text(const ShapFoilResult& result, const BinarizedMatrix& bin) {
  std::ostringstream out;
  for (std::size_t i = 0; i < result.audits.size(); ++i) {
    const ShapFoilAudit& a = result.audits[i];
    out << "iteration " << i + 1 << ": sv=" << a.sv_index << " train_row=" << a.sv_train_row
        << " pulled=" << a.pulled << '\n';
    out << "  phi_order:";
    for (int col : a.phi_order) out << ' ' << bin.column_names[col];
    out << '\n';
    if (a.accepted) {
      out << "  accepted: precision=" << format_double_trimmed(a.precision, 4)
          << " covered_pos=" << a.covered_pos << " covered_neg=" << a.covered_neg << '\n';
    } else {
      out << "  rejected: " << a.reject_reason << '\n';
    }
  }
  return out.str();
}

int cmd_inspect(const std::string& data, const std::string& schema_path, const CommonOpts& common) {
  Dataset d = load_csv(data, schema_path);
  std::cout << "dataset: " << data << '\n';
  std::cout << "samples: " << d.samples.size() << " (" << d.count_label(+1) << " positive, "
            << d.count_label(-1) << " negative)\n";
  std::cout << "target: " << d.schema.target_name << " (positive '" << d.schema.positive_label
            << "')\n";
  std::cout << "features:\n";
  for (std::size_t f = 0; f < d.schema.feature_names.size(); ++f) {
    std::cout << "  " << d.schema.feature_names[f];
    if (d.schema.is_numeric(f)) {
      std::cout << " numeric\n";
    } else {
      std::cout << " categorical {";
      const auto& dom = d.schema.domain(f);
      for (std::size_t i = 0; i < dom.size(); ++i) std::cout << (i ? "," : "") << dom[i];
      std::cout << "}\n";
    }
  }
  BinarizedMatrix bin = binarize(d, true);
  std::cout << "binarized columns: " << bin.cols() << '\n';

  fs::path dir = ensure_out(common);
  RunManifest m;
  manifest_common(m, "dataset inspect", common);
  manifest_data(m, data, schema_path);
  m.save((dir / "inspect.manifest").string());
  return 0;
}

int cmd_train(const std::string& data, const std::string& schema_path, const KernelOpts& kernel,
              const CommonOpts& common) {
  Dataset d = load_csv(data, schema_path);
  TrainedModel t = train_on(d, kernel, common);

  fs::path dir = ensure_out(common);
  write_file((dir / "svm.model").string(), model_to_text(t.model, &t.bin));

  EvalReport r = evaluate_model(t.model, t.bin, d);
  std::cout << "trained " << kernel_to_string(t.hp.kernel) << " C=" << t.hp.C << ", "
            << t.model.support_vectors.size() << " support vectors\n";
  std::cout << "training-set metrics:\n" << report_text(r);

  RunManifest m;
  manifest_common(m, "train", common);
  manifest_data(m, data, schema_path);
  manifest_hyperparams(m, t.hp, kernel.grid_search);
  m.save((dir / "train.manifest").string());
  return 0;
}

std::vector<int> resolve_rows(const std::string& rows_spec, const SvmModel& model,
                              std::size_t n_rows) {
  std::vector<int> rows;
  if (rows_spec == "sv") {
    rows = model.sv_original_indices;
  } else if (rows_spec == "all") {
    for (std::size_t i = 0; i < n_rows; ++i) rows.push_back(static_cast<int>(i));
  } else {
    for (const std::string& tok : split_on(rows_spec, ',')) {
      int idx = std::stoi(trim(tok));
      if (idx < 0 || static_cast<std::size_t>(idx) >= n_rows)
        throw DataError("row index " + std::to_string(idx) + " out of range");
      rows.push_back(idx);
    }
  }
  return rows;
}

int cmd_shap(const std::string& model_path, const std::string& data,
             const std::string& schema_path, const std::string& rows_spec,
             const ShapFlagOpts& shap_flags, double retrain_C, const CommonOpts& common) {
  BinarizedMatrix preprocessing;
  SvmModel model = model_from_text(read_file(model_path), &preprocessing);
  if (preprocessing.cols() == 0)
    throw DataError("model file lacks a preprocessing block; retrain with the train subcommand");

  Dataset d = load_csv(data, schema_path);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (const Sample& s : d.samples) {
    X.push_back(binarize_sample(preprocessing, d.schema, s));
    y.push_back(s.label);
  }

  ShapOptions opts = resolve_shap(shap_flags, common);
  std::vector<int> rows = resolve_rows(rows_spec, model, X.size());

  ShapResult result;
  if (opts.mode == ShapModeKind::Retrain) {
    Hyperparams hp;
    hp.C = retrain_C;
    hp.kernel = model.kernel;
    hp.seed = common.seed;
    result.base_value = 0.0;
    result.mode = "retrain";
    for (int row : rows) {
      result.row_indices.push_back(row);
      result.phi.push_back(
          shapley_exact_retrain(X, y, hp, static_cast<std::size_t>(row), opts.exact_limit));
    }
  } else {
    result = shap_matrix(model, X, rows, opts);
  }

  fs::path dir = ensure_out(common);
  write_file((dir / "shap.csv").string(), shap_matrix_to_csv(result, preprocessing.column_names));
  std::cout << "wrote " << (dir / "shap.csv").string() << " (" << result.phi.size() << " rows, "
            << result.mode << " mode)\n";

  RunManifest m;
  manifest_common(m, "shap", common);
  manifest_data(m, data, schema_path);
  m.set("model", model_path);
  m.set("model_hash", file_hash(model_path));
  m.set("rows", rows_spec);
  manifest_shap(m, opts);
  m.save((dir / "shap.manifest").string());
  return 0;
}

int cmd_induce(const std::string& data, const std::string& schema_path, const KernelOpts& kernel,
               const ShapFlagOpts& shap_flags, double theta, int max_literals, bool both_classes,
               const CommonOpts& common) {
  Dataset d = load_csv(data, schema_path);
  TrainedModel t = train_on(d, kernel, common);

  ShapFoilParams params;
  params.theta = theta;
  params.max_literals = max_literals;
  params.shap = resolve_shap(shap_flags, common);
  params.seed = common.seed;

  fs::path dir = ensure_out(common);
  write_file((dir / "svm.model").string(), model_to_text(t.model, &t.bin));

  Hypothesis hypothesis;
  std::string audit;
  if (both_classes) {
    Hyperparams hp = t.hp;
    auto trainer = [&](const std::vector<std::vector<double>>& X, const std::vector<int>& y) {
      return train(X, y, hp);
    };
    auto [pos, neg] = induce_both_classes(trainer, d, t.bin, params);
    hypothesis = pos.hypothesis;
    for (const Clause& c : neg.hypothesis.clauses) hypothesis.clauses.push_back(c);
    audit = audit_text(pos, t.bin) + audit_text(neg, t.bin);
  } else {
    ShapFoilResult result = shap_foil(t.model, d, t.bin, params);
    hypothesis = result.hypothesis;
    audit = audit_text(result, t.bin);
  }

  write_file((dir / "rules.pl").string(), serialize_prolog(hypothesis));
  write_file((dir / "audit.txt").string(), audit);

  EvalReport r = evaluate_with_fidelity(hypothesis, t.model, t.bin, d);
  std::cout << "induced " << hypothesis.clauses.size() << " clause(s) -> "
            << (dir / "rules.pl").string() << '\n';
  std::cout << "training-set metrics:\n" << report_text(r);

  RunManifest m;
  manifest_common(m, "induce", common);
  manifest_data(m, data, schema_path);
  manifest_hyperparams(m, t.hp, kernel.grid_search);
  manifest_shap(m, params.shap);
  m.set("theta", theta);
  m.set("max_literals", static_cast<std::int64_t>(max_literals));
  m.set("both_classes", std::string(both_classes ? "true" : "false"));
  m.save((dir / "induce.manifest").string());
  return 0;
}

int cmd_foil(const std::string& data, const std::string& schema_path, int max_clause_length,
             double min_gain, int quantiles, const CommonOpts& common) {
  Dataset d = load_csv(data, schema_path);
  FoilParams params;
  params.max_clause_length = max_clause_length;
  params.min_gain = min_gain;
  if (quantiles > 0) params.numeric_threshold_strategy = Quantiles{quantiles};

  FoilResult result = foil_induce(d, params);

  fs::path dir = ensure_out(common);
  write_file((dir / "foil.pl").string(), serialize_prolog(result.hypothesis));

  std::ostringstream stats;
  for (std::size_t i = 0; i < result.stats.size(); ++i) {
    const FoilClauseStats& s = result.stats[i];
    stats << "clause " << i + 1 << ": covered_pos=" << s.covered_pos
          << " covered_neg=" << s.covered_neg
          << (s.hit_max_length ? " (stopped at max clause length)" : "") << '\n';
  }
  write_file((dir / "foil_stats.txt").string(), stats.str());

  std::cout << "foil induced " << result.hypothesis.clauses.size() << " clause(s) -> "
            << (dir / "foil.pl").string() << '\n';
  std::cout << report_text(evaluate_hypothesis(result.hypothesis, d));

  RunManifest m;
  manifest_common(m, "foil", common);
  manifest_data(m, data, schema_path);
  m.set("foil.max_clause_length", static_cast<std::int64_t>(max_clause_length));
  m.set("foil.min_gain", min_gain);
  m.set("foil.quantiles", static_cast<std::int64_t>(quantiles));
  m.save((dir / "foil.manifest").string());
  return 0;
}

int cmd_eval(const std::string& rules_path, const std::string& model_path, const std::string& test,
             const std::string& schema_path, const CommonOpts& common) {
  Dataset d = load_csv(test, schema_path);
  fs::path dir = ensure_out(common);

  std::optional<Hypothesis> hypothesis;
  if (!rules_path.empty()) hypothesis = parse_prolog(read_file(rules_path));

  std::optional<SvmModel> model;
  BinarizedMatrix preprocessing;
  if (!model_path.empty()) {
    model = model_from_text(read_file(model_path), &preprocessing);
    if (preprocessing.cols() == 0) throw DataError("model file lacks a preprocessing block");
  }

  EvalReport r;
  if (hypothesis && model)
    r = evaluate_with_fidelity(*hypothesis, *model, preprocessing, d);
  else if (hypothesis)
    r = evaluate_hypothesis(*hypothesis, d);
  else if (model)
    r = evaluate_model(*model, preprocessing, d);
  else
    throw DataError("eval needs --rules and/or --svm");

  std::string text = report_text(r);
  write_file((dir / "eval.txt").string(), text);
  std::cout << text;

  RunManifest m;
  manifest_common(m, "eval", common);
  manifest_data(m, test, schema_path);
  if (!rules_path.empty()) {
    m.set("rules", rules_path);
    m.set("rules_hash", file_hash(rules_path));
  }
  if (!model_path.empty()) {
    m.set("model", model_path);
    m.set("model_hash", file_hash(model_path));
  }
  m.save((dir / "eval.manifest").string());
  return 0;
}

int cmd_compare(const std::string& model_path, const std::string& rules_path,
                const std::string& rules_foil_path, const std::string& test,
                const std::string& schema_path, const std::string& format,
                const CommonOpts& common) {
  Dataset d = load_csv(test, schema_path);
  BinarizedMatrix preprocessing;
  SvmModel model = model_from_text(read_file(model_path), &preprocessing);
  if (preprocessing.cols() == 0) throw DataError("model file lacks a preprocessing block");

  std::vector<std::pair<std::string, EvalReport>> reports;
  reports.emplace_back("svm", evaluate_model(model, preprocessing, d));
  if (!rules_path.empty()) {
    Hypothesis h = parse_prolog(read_file(rules_path));
    reports.emplace_back("shap-foil", evaluate_with_fidelity(h, model, preprocessing, d));
  }
  if (!rules_foil_path.empty()) {
    Hypothesis h = parse_prolog(read_file(rules_foil_path));
    reports.emplace_back("foil", evaluate_with_fidelity(h, model, preprocessing, d));
  }

  ReportFormat fmt = format == "csv" ? ReportFormat::Csv : ReportFormat::Text;
  std::string text = compare_report(reports, fmt);
  fs::path dir = ensure_out(common);
  std::string filename = fmt == ReportFormat::Csv ? "compare.csv" : "compare.txt";
  write_file((dir / filename).string(), text);
  std::cout << text;

  RunManifest m;
  manifest_common(m, "compare", common);
  manifest_data(m, test, schema_path);
  m.set("model", model_path);
  m.set("model_hash", file_hash(model_path));
  if (!rules_path.empty()) m.set("rules", rules_path);
  if (!rules_foil_path.empty()) m.set("rules_foil", rules_foil_path);
  m.set("format", format);
  m.save((dir / "compare.manifest").string());
  return 0;
}

int cmd_synth(const std::string& name, std::size_t size, const CommonOpts& common) {
  SynthFiles files = generate_synthetic(name, common.seed, size);
  fs::path dir = ensure_out(common);
  write_file((dir / (name + ".csv")).string(), files.csv);
  write_file((dir / (name + ".schema")).string(), files.schema);
  std::cout << "wrote " << (dir / (name + ".csv")).string() << " and "
            << (dir / (name + ".schema")).string() << '\n';

  RunManifest m;
  manifest_common(m, "synth", common);
  m.set("generator", name);
  m.set("size", static_cast<std::uint64_t>(size));
  m.set("csv_hash", content_hash(files.csv));
  m.save((dir / "synth.manifest").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SHAP-FOIL: logic-program explanations for kernel SVMs"};
  app.require_subcommand(1);

  std::map<std::string, std::string> config = load_config_defaults();

  std::string data, schema_path, model_path, rules_path, rules_foil_path, test_path;
  std::string rows_spec = "sv", format = "text";
  double theta = 0.85, retrain_C = 1.0, min_gain = 1e-6;
  int max_literals = 8, max_clause_length = 8, quantiles = 0;
  std::size_t synth_size = 200;
  std::string synth_name;
  bool both_classes = false;

  CommonOpts common;
  KernelOpts kernel;
  ShapFlagOpts shap_flags;

  CLI::App* dataset_cmd = app.add_subcommand("dataset", "Dataset utilities");
  dataset_cmd->require_subcommand(1);
  CLI::App* inspect = dataset_cmd->add_subcommand("inspect", "Print a schema/label summary");
  inspect->add_option("--data", data, "CSV file")->required();
  inspect->add_option("--schema", schema_path, "Schema sidecar")->required();
  add_common(inspect, common);

  CLI::App* train_cmd = app.add_subcommand("train", "Train a kernel SVM, write svm.model");
  train_cmd->add_option("--data", data)->required();
  train_cmd->add_option("--schema", schema_path)->required();
  add_kernel_flags(train_cmd, kernel);
  add_common(train_cmd, common);

  CLI::App* shap_cmd = app.add_subcommand("shap", "Write the Shapley phi matrix as CSV");
  shap_cmd->add_option("--model", model_path, "svm.model file")->required();
  shap_cmd->add_option("--data", data)->required();
  shap_cmd->add_option("--schema", schema_path)->required();
  shap_cmd->add_option("--rows", rows_spec, "'sv', 'all', or comma-separated row indices");
  shap_cmd->add_option("--C", retrain_C, "Penalty for retrain-mode refits");
  add_shap_flags(shap_cmd, shap_flags);
  add_common(shap_cmd, common);

  CLI::App* induce_cmd =
      app.add_subcommand("induce", "SHAP-FOIL pipeline: train, explain, induce rules");
  induce_cmd->add_option("--data", data)->required();
  induce_cmd->add_option("--schema", schema_path)->required();
  induce_cmd->add_option("--theta", theta, "Clause purity threshold")
      ->check(CLI::Range(0.0, 1.0));
  induce_cmd->add_option("--max-literals", max_literals)->check(CLI::Range(1, 64));
  induce_cmd->add_flag("--both-classes", both_classes,
                       "Also induce rules for the negative class from a flipped model");
  add_kernel_flags(induce_cmd, kernel);
  add_shap_flags(induce_cmd, shap_flags);
  add_common(induce_cmd, common);

  CLI::App* foil_cmd = app.add_subcommand("foil", "FOIL baseline rule induction");
  foil_cmd->add_option("--data", data)->required();
  foil_cmd->add_option("--schema", schema_path)->required();
  foil_cmd->add_option("--max-clause-length", max_clause_length)->check(CLI::Range(1, 64));
  foil_cmd->add_option("--min-gain", min_gain);
  foil_cmd->add_option("--quantiles", quantiles,
                       "Numeric threshold count (0 = midpoints of distinct values)");
  add_common(foil_cmd, common);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate rules and/or a model on a test CSV");
  eval_cmd->add_option("--rules", rules_path, "Rule file (.pl)");
  eval_cmd->add_option("--svm", model_path, "svm.model file");
  eval_cmd->add_option("--test", test_path)->required();
  eval_cmd->add_option("--schema", schema_path)->required();
  add_common(eval_cmd, common);

  CLI::App* compare_cmd = app.add_subcommand("compare", "Side-by-side metric tables");
  compare_cmd->add_option("--svm", model_path)->required();
  compare_cmd->add_option("--rules", rules_path, "SHAP-FOIL rule file");
  compare_cmd->add_option("--rules-foil", rules_foil_path, "FOIL rule file");
  compare_cmd->add_option("--test", test_path)->required();
  compare_cmd->add_option("--schema", schema_path)->required();
  compare_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));
  add_common(compare_cmd, common);

  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("name", synth_name, "clusters3, nested, or xor4")->required();
  synth_cmd->add_option("--size", synth_size, "Row count");
  add_common(synth_cmd, common);

  for (CLI::App* cmd : {inspect, train_cmd, shap_cmd, induce_cmd, foil_cmd, eval_cmd, compare_cmd,
                        synth_cmd})
    apply_config_defaults(cmd, config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (inspect->parsed()) return cmd_inspect(data, schema_path, common);
    if (train_cmd->parsed()) return cmd_train(data, schema_path, kernel, common);
    if (shap_cmd->parsed())
      return cmd_shap(model_path, data, schema_path, rows_spec, shap_flags, retrain_C, common);
    if (induce_cmd->parsed())
      return cmd_induce(data, schema_path, kernel, shap_flags, theta, max_literals, both_classes,
                        common);
    if (foil_cmd->parsed())
      return cmd_foil(data, schema_path, max_clause_length, min_gain, quantiles, common);
    if (eval_cmd->parsed())
      return cmd_eval(rules_path, model_path, test_path, schema_path, common);
    if (compare_cmd->parsed())
      return cmd_compare(model_path, rules_path, rules_foil_path, test_path, schema_path, format,
                         common);
    if (synth_cmd->parsed()) return cmd_synth(synth_name, synth_size, common);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what();
    if (e.row) std::cerr << " (row " << e.row << ")";
    if (!e.column.empty()) std::cerr << " (column " << e.column << ")";
    std::cerr << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
