#include "shapfoil/foil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace shapfoil {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool literal_satisfied(const Schema& schema, const Sample& s, const Literal& lit) {
  int fi = schema.feature_index(literal_feature(lit));
  return std::visit(
      [&](const auto& l) -> bool {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, CatEq>) {
          return std::get<std::string>(s.values[fi]) == l.value;
        } else if constexpr (std::is_same_v<T, NegCatEq>) {
          return std::get<std::string>(s.values[fi]) != l.value;
        } else {
          double v = std::get<double>(s.values[fi]);
          return v >= l.lo && v <= l.hi;
        }
      },
      lit);
}

}  // namespace

std::vector<Literal> candidate_literals(const Dataset& d, const ThresholdStrategy& strategy) {
  std::vector<Literal> out;
  const Schema& s = d.schema;
  for (std::size_t f = 0; f < s.feature_names.size(); ++f) {
    const std::string& name = s.feature_names[f];
    if (!s.is_numeric(f)) {
      for (const std::string& v : s.domain(f)) {
        out.emplace_back(CatEq{name, v});
        out.emplace_back(NegCatEq{name, v});
      }
      continue;
    }
    std::vector<double> vals;
    vals.reserve(d.samples.size());
    for (const Sample& sm : d.samples) vals.push_back(std::get<double>(sm.values[f]));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    std::vector<double> thresholds;
    if (std::holds_alternative<Midpoints>(strategy)) {
      for (std::size_t i = 0; i + 1 < vals.size(); ++i)
        thresholds.push_back(0.5 * (vals[i] + vals[i + 1]));
    } else {
      int k = std::get<Quantiles>(strategy).k;
      for (int q = 1; q < k; ++q) {
        double pos = static_cast<double>(q) / k * static_cast<double>(vals.size() - 1);
        auto idx = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(idx);
        double t = idx + 1 < vals.size() ? vals[idx] * (1 - frac) + vals[idx + 1] * frac
                                         : vals[idx];
        thresholds.push_back(t);
      }
      std::sort(thresholds.begin(), thresholds.end());
      thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    }
    for (double t : thresholds) {
      out.emplace_back(NumRange{name, kNegInf, t});  // f <= t
      out.emplace_back(NumRange{name, t, kInf});     // f >= t
    }
  }
  return out;
}

double info_gain(std::size_t p0, std::size_t n0, std::size_t p1, std::size_t n1, std::size_t t) {
  if (p1 == 0 || p0 == 0) return kNegInf;
  double r1 = std::log2(static_cast<double>(p1) / static_cast<double>(p1 + n1));
  double r0 = std::log2(static_cast<double>(p0) / static_cast<double>(p0 + n0));
  return static_cast<double>(t) * (r1 - r0);
}

FoilResult foil_induce(const Dataset& d, const FoilParams& params) {
  if (params.max_clause_length < 1)
    throw LogicError("foil_induce: max_clause_length must be >= 1");
  const Schema& schema = d.schema;
  std::vector<int> pos_remaining, all_neg;
  for (std::size_t i = 0; i < d.samples.size(); ++i)
    (d.samples[i].label > 0 ? pos_remaining : all_neg).push_back(static_cast<int>(i));
  if (pos_remaining.empty()) throw LogicError("foil_induce: no positive examples");

  const std::vector<Literal> candidates = candidate_literals(d, params.numeric_threshold_strategy);

  FoilResult result;
  while (!pos_remaining.empty()) {
    Clause c{head_name(schema), {}};
    std::vector<int> cur_pos = pos_remaining;
    std::vector<int> cur_neg = all_neg;  // reset each outer iteration
    int additions = 0;

    while (!cur_neg.empty() && additions < params.max_clause_length) {
      double best_gain = kNegInf;
      std::size_t best_idx = 0;
      std::vector<int> best_pos, best_neg;
      for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        const Literal& lit = candidates[ci];
        std::vector<int> p1_idx, n1_idx;
        for (int i : cur_pos)
          if (literal_satisfied(schema, d.samples[i], lit)) p1_idx.push_back(i);
        if (p1_idx.empty()) continue;
        for (int i : cur_neg)
          if (literal_satisfied(schema, d.samples[i], lit)) n1_idx.push_back(i);
        double g = info_gain(cur_pos.size(), cur_neg.size(), p1_idx.size(), n1_idx.size(),
                             p1_idx.size());
        if (g > best_gain) {  // strict: ties keep the earliest candidate
          best_gain = g;
          best_idx = ci;
          best_pos = std::move(p1_idx);
          best_neg = std::move(n1_idx);
        }
      }
      if (!(best_gain > params.min_gain)) break;

      const Literal& chosen = candidates[best_idx];
      if (const auto* nr = std::get_if<NumRange>(&chosen)) {
        // Keep at most one interval per numeric feature by intersecting.
        auto slot = std::find_if(c.body.begin(), c.body.end(), [&](const Literal& l) {
          return std::holds_alternative<NumRange>(l) && literal_feature(l) == nr->feature;
        });
        if (slot != c.body.end()) {
          auto& existing = std::get<NumRange>(*slot);
          existing.lo = std::max(existing.lo, nr->lo);
          existing.hi = std::min(existing.hi, nr->hi);
        } else {
          c.body.push_back(chosen);
        }
      } else {
        if (std::find(c.body.begin(), c.body.end(), chosen) == c.body.end())
          c.body.push_back(chosen);
      }
      cur_pos = std::move(best_pos);
      cur_neg = std::move(best_neg);
      ++additions;
    }

    FoilClauseStats st;
    st.covered_pos = cur_pos.size();
    st.covered_neg = cur_neg.size();
    st.hit_max_length = !cur_neg.empty();
    result.hypothesis.clauses.push_back(c);
    result.stats.push_back(st);

    // Remove the positives this clause covers from the outer pool. cur_pos is
    // never empty here: every chosen literal kept p1 > 0, and an empty body
    // covers all of pos_remaining.
    std::set<int> covered(cur_pos.begin(), cur_pos.end());
    std::vector<int> keep;
    for (int i : pos_remaining)
      if (!covered.count(i)) keep.push_back(i);
    pos_remaining = std::move(keep);
  }
  return result;
}

}  // namespace shapfoil
