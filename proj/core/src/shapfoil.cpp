#include "shapfoil/shapfoil.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "shapfoil/strings.hpp"

namespace shapfoil {

SimMap annotate_samples(const SvmModel& m, const std::vector<int>& S,
                        const std::vector<int>& sample_indices,
                        const std::vector<std::vector<double>>& X) {
  if (S.empty()) throw LogicError("annotate_samples: empty support vector set");
  std::vector<int> svs = S;
  std::sort(svs.begin(), svs.end());
  SimMap map;
  for (int s : svs) map[s];  // every sv gets a (possibly empty) list
  for (int i : sample_indices) {
    int best_sv = svs.front();
    double best_sim = -std::numeric_limits<double>::infinity();
    for (int s : svs) {
      double sim = similarity(m, s, X[i]);
      if (sim > best_sim) {  // strict: ties keep the lowest sv index
        best_sim = sim;
        best_sv = s;
      }
    }
    map[best_sv].push_back(i);
  }
  return map;
}

int select_support_vector(const SimMap& sim_map, const std::vector<int>& S) {
  if (S.empty()) throw LogicError("select_support_vector: empty support vector set");
  std::vector<int> svs = S;
  std::sort(svs.begin(), svs.end());
  int best = svs.front();
  std::size_t best_len = 0;
  bool first = true;
  for (int s : svs) {
    auto it = sim_map.find(s);
    std::size_t len = it == sim_map.end() ? 0 : it->second.size();
    if (first || len > best_len) {
      best = s;
      best_len = len;
      first = false;
    }
  }
  return best;
}

std::vector<Literal> build_literals_for_sv(const std::vector<double>& sv_binarized_row,
                                           const std::vector<double>& shap_row,
                                           const BinarizedMatrix& columns, const Dataset& d,
                                           const std::vector<int>& associated_samples,
                                           std::vector<int>* phi_order_out) {
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < shap_row.size(); ++c)
    if (shap_row[c] > 0.0) order.push_back(c);
  if (order.empty()) throw NoExplainingFeatures();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (shap_row[a] != shap_row[b]) return shap_row[a] > shap_row[b];
    return a < b;
  });

  std::vector<Literal> out;
  for (std::size_t c : order) {
    const ColumnRef& ref = columns.column_map[c];
    const std::string& fname = d.schema.feature_names[ref.feature];
    if (ref.is_indicator()) {
      const std::string& value = d.schema.domain(ref.feature)[ref.domain_index];
      if (sv_binarized_row[c] > 0.5)
        out.emplace_back(CatEq{fname, value});
      else
        out.emplace_back(NegCatEq{fname, value});
    } else {
      double lo, hi;
      if (associated_samples.empty()) {
        lo = hi = columns.destandardize(c, sv_binarized_row[c]);
      } else {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (int i : associated_samples) {
          double v = std::get<double>(d.samples[i].values[ref.feature]);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      out.emplace_back(NumRange{fname, lo, hi});
    }
    if (phi_order_out) phi_order_out->push_back(static_cast<int>(c));
  }
  return out;
}

std::vector<Literal> build_literals_for_sv(const std::vector<double>& sv_binarized_row,
                                           const std::vector<double>& shap_row,
                                           const BinarizedMatrix& columns, const Dataset& d,
                                           const std::vector<int>& associated_samples) {
  return build_literals_for_sv(sv_binarized_row, shap_row, columns, d, associated_samples,
                               nullptr);
}

std::optional<Clause> specialize(const std::vector<Literal>& literals, const Dataset& d,
                                 const std::vector<int>& remaining, double theta,
                                 int max_literals, const std::string& head) {
  Clause c{head, {}};
  int added = 0;
  for (const Literal& lit : literals) {
    if (added >= max_literals) break;
    c.body.push_back(lit);
    ++added;
    std::size_t pos = 0, neg = 0;
    for (int i : remaining) {
      if (!covers(c, d.schema, d.samples[i])) continue;
      (d.samples[i].label > 0 ? pos : neg)++;
    }
    if (pos + neg == 0) continue;  // over-specialized; precision undefined
    double precision = static_cast<double>(pos) / static_cast<double>(pos + neg);
    if (precision >= theta && pos >= 1) return c;  // earliest stop maximizes coverage
  }
  return std::nullopt;
}

ShapFoilResult shap_foil(const SvmModel& m, const Dataset& d, const BinarizedMatrix& bin,
                         const ShapFoilParams& params) {
  if (!(params.theta > 0.0 && params.theta <= 1.0))
    throw LogicError("shap_foil: theta must lie in (0,1]");
  std::vector<int> S = true_positive_svs(m);
  if (S.empty()) throw LogicError("shap_foil: no true-positive support vectors");

  // Shapley rows only for the TP support vectors' training rows.
  std::vector<int> sv_rows;
  for (int s : S) sv_rows.push_back(m.sv_original_indices[s]);
  ShapOptions shap_opts = params.shap;
  if (shap_opts.seed == 0) shap_opts.seed = params.seed;
  ShapResult shap = shap_matrix(m, bin.rows, sv_rows, shap_opts);
  std::map<int, const std::vector<double>*> phi_of_sv;
  for (std::size_t k = 0; k < S.size(); ++k) phi_of_sv[S[k]] = &shap.phi[k];

  std::vector<int> remaining(d.samples.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<int>(i);
  auto positives_left = [&] {
    return std::count_if(remaining.begin(), remaining.end(),
                         [&](int i) { return d.samples[i].label > 0; });
  };

  const std::string head = head_name(d.schema);
  ShapFoilResult result;
  while (!S.empty() && positives_left() > 0) {
    SimMap sim_map = annotate_samples(m, S, remaining, bin.rows);
    int sv = select_support_vector(sim_map, S);

    ShapFoilAudit audit;
    audit.sv_index = sv;
    audit.sv_train_row = m.sv_original_indices[sv];
    audit.pulled = sim_map[sv].size();

    std::optional<Clause> clause;
    try {
      std::vector<Literal> literals = build_literals_for_sv(
          bin.rows[m.sv_original_indices[sv]], *phi_of_sv[sv], bin, d, sim_map[sv],
          &audit.phi_order);
      clause = specialize(literals, d, remaining, params.theta, params.max_literals, head);
      if (!clause) {
        // Audit the fully specialized clause that failed the purity gate.
        Clause full{head, {}};
        int added = 0;
        for (const Literal& l : literals) {
          if (added++ >= params.max_literals) break;
          full.body.push_back(l);
        }
        std::size_t pos = 0, neg = 0;
        for (int i : remaining)
          if (covers(full, d.schema, d.samples[i]))
            (d.samples[i].label > 0 ? pos : neg)++;
        audit.covered_pos = pos;
        audit.covered_neg = neg;
        audit.precision = pos + neg ? static_cast<double>(pos) / (pos + neg) : 0.0;
        std::ostringstream why;
        why << "precision " << format_double_trimmed(audit.precision, 3) << " < theta "
            << format_double_trimmed(params.theta, 3);
        audit.reject_reason = pos + neg == 0 ? "empty coverage" : why.str();
      }
    } catch (const NoExplainingFeatures&) {
      audit.reject_reason = "no positive-phi feature";
    }

    if (clause) {
      std::size_t pos = 0, neg = 0;
      std::vector<int> keep;
      for (int i : remaining) {
        bool cov = covers(*clause, d.schema, d.samples[i]);
        if (cov) (d.samples[i].label > 0 ? pos : neg)++;
        // Covered positives leave the pool; negatives stay so later clauses
        // are still audited against them.
        if (!(cov && d.samples[i].label > 0)) keep.push_back(i);
      }
      audit.accepted = true;
      audit.covered_pos = pos;
      audit.covered_neg = neg;
      audit.precision = static_cast<double>(pos) / static_cast<double>(pos + neg);
      result.hypothesis.clauses.push_back(*clause);
      remaining = std::move(keep);
    }
    result.audits.push_back(std::move(audit));
    S.erase(std::find(S.begin(), S.end(), sv));
  }
  return result;
}

std::pair<ShapFoilResult, ShapFoilResult> induce_both_classes(
    const std::function<SvmModel(const std::vector<std::vector<double>>&,
                                 const std::vector<int>&)>& trainer,
    const Dataset& d, const BinarizedMatrix& bin, const ShapFoilParams& params) {
  if (d.count_label(+1) == 0 || d.count_label(-1) == 0)
    throw LogicError("induce_both_classes: both classes must be present");

  std::vector<int> y;
  for (const Sample& s : d.samples) y.push_back(s.label);

  SvmModel pos_model = trainer(bin.rows, y);
  ShapFoilResult pos = shap_foil(pos_model, d, bin, params);

  Dataset flipped = d;
  for (Sample& s : flipped.samples) s.label = -s.label;
  flipped.schema.positive_label = "not_" + d.schema.positive_label;
  std::vector<int> y_neg;
  for (int v : y) y_neg.push_back(-v);
  SvmModel neg_model = trainer(bin.rows, y_neg);
  ShapFoilResult neg = shap_foil(neg_model, flipped, bin, params);

  return {std::move(pos), std::move(neg)};
}

}  // namespace shapfoil
