#include "shapfoil/shap.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "shapfoil/dataset.hpp"
#include "shapfoil/strings.hpp"

namespace shapfoil {

namespace {

// Subset weights |S|!(d-|S|-1)!/d! computed once per d via log-factorials
// would lose the exactness we want for small d; plain factorials are exact
// up to d=20 in double.
std::vector<double> subset_weights(int d) {
  std::vector<double> fact(d + 1, 1.0);
  for (int i = 1; i <= d; ++i) fact[i] = fact[i - 1] * i;
  std::vector<double> w(d);
  for (int s = 0; s < d; ++s) w[s] = fact[s] * fact[d - s - 1] / fact[d];
  return w;
}

double marginalize_value(const SvmModel& m, std::span<const double> x,
                         const std::vector<std::vector<double>>& background,
                         const std::vector<bool>& present) {
  std::vector<double> hybrid(x.size());
  double sum = 0;
  for (const auto& z : background) {
    for (std::size_t j = 0; j < x.size(); ++j) hybrid[j] = present[j] ? x[j] : z[j];
    sum += decision_value(m, hybrid);
  }
  return sum / static_cast<double>(background.size());
}

}  // namespace

std::vector<double> shapley_exact_fn(const std::function<double(const std::vector<bool>&)>& value,
                                     int d) {
  if (d < 1) throw ShapError("shapley_exact_fn: need at least one feature");
  if (d > 20) throw ShapError("shapley_exact_fn: d too large for subset enumeration");
  const std::uint32_t n_masks = 1u << d;
  std::vector<double> v(n_masks);
  std::vector<bool> present(d);
  for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
    for (int j = 0; j < d; ++j) present[j] = (mask >> j) & 1u;
    v[mask] = value(present);
  }
  const auto w = subset_weights(d);
  std::vector<double> phi(d, 0.0);
  for (int i = 0; i < d; ++i) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      phi[i] += w[std::popcount(mask)] * (v[mask | bit] - v[mask]);
    }
  }
  return phi;
}

std::vector<double> shapley_exact(const SvmModel& m, const std::vector<std::vector<double>>& X,
                                  std::size_t sample_index,
                                  const std::vector<std::vector<double>>& background,
                                  int exact_limit) {
  if (background.empty()) throw ShapError("shapley_exact: empty background");
  const int d = static_cast<int>(X.at(sample_index).size());
  if (d > exact_limit)
    throw ShapError("shapley_exact: " + std::to_string(d) + " features exceed exact_limit " +
                    std::to_string(exact_limit) + "; use shapley_sampled");
  const auto& x = X[sample_index];
  return shapley_exact_fn(
      [&](const std::vector<bool>& present) {
        return marginalize_value(m, x, background, present);
      },
      d);
}

std::vector<double> shapley_exact_retrain(const std::vector<std::vector<double>>& X,
                                          const std::vector<int>& y, const Hyperparams& h,
                                          std::size_t sample_index, int exact_limit) {
  const int d = static_cast<int>(X.at(sample_index).size());
  if (d > exact_limit)
    throw ShapError("shapley_exact_retrain: d exceeds exact_limit " +
                    std::to_string(exact_limit));
  SvmModel full = train(X, y, h);
  double alpha_sum = std::accumulate(full.alphas.begin(), full.alphas.end(), 0.0);
  double empty_value = 0;
  for (std::size_t i = 0; i < full.alphas.size(); ++i)
    empty_value += full.alphas[i] * full.sv_labels[i];
  empty_value = alpha_sum > 0 ? empty_value / alpha_sum : 0.0;

  const auto& x = X[sample_index];
  return shapley_exact_fn(
      [&](const std::vector<bool>& present) -> double {
        std::vector<int> cols;
        for (int j = 0; j < d; ++j)
          if (present[j]) cols.push_back(j);
        if (cols.empty()) return empty_value;
        std::vector<std::vector<double>> Xs(X.size());
        for (std::size_t r = 0; r < X.size(); ++r) {
          Xs[r].reserve(cols.size());
          for (int cjj : cols) Xs[r].push_back(X[r][cjj]);
        }
        std::vector<double> xs;
        for (int cjj : cols) xs.push_back(x[cjj]);
        SvmModel sub = train(Xs, y, h);
        return decision_value(sub, xs);
      },
      d);
}

std::vector<double> shapley_sampled(const SvmModel& m, const std::vector<std::vector<double>>& X,
                                    std::size_t sample_index,
                                    const std::vector<std::vector<double>>& background,
                                    int n_permutations, std::uint64_t seed) {
  if (n_permutations < 1) throw ShapError("shapley_sampled: n_permutations must be >= 1");
  if (background.empty()) throw ShapError("shapley_sampled: empty background");
  const int d = static_cast<int>(X.at(sample_index).size());
  const auto& x = X[sample_index];

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<bool> present(d, false);
  std::vector<double> phi(d, 0.0);

  double d_factorial = 1;
  for (int i = 2; i <= d && d_factorial <= n_permutations; ++i) d_factorial *= i;
  const bool enumerate = d_factorial <= n_permutations;

  auto walk = [&](const std::vector<int>& ord) {
    std::fill(present.begin(), present.end(), false);
    double prev = marginalize_value(m, x, background, present);
    for (int i : ord) {
      present[i] = true;
      double cur = marginalize_value(m, x, background, present);
      phi[i] += cur - prev;
      prev = cur;
    }
  };

  int used = 0;
  if (enumerate) {
    // Enough budget to cover every order exactly once: the estimate becomes
    // the exact Shapley value.
    do {
      walk(order);
      ++used;
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    for (int p = 0; p < n_permutations; ++p) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      walk(order);
      ++used;
    }
  }
  for (double& v : phi) v /= static_cast<double>(used);
  return phi;
}

ShapResult shap_matrix(const SvmModel& m, const std::vector<std::vector<double>>& X,
                       const std::vector<int>& rows, const ShapOptions& opts,
                       const std::vector<int>& y) {
  ShapResult res;
  res.row_indices = rows;

  std::vector<std::vector<double>> background;
  if (opts.background_limit > 0 && X.size() > opts.background_limit) {
    // Deterministic seeded subsample, order-stable.
    std::vector<std::size_t> idx(X.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ULL + 99);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(opts.background_limit);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) background.push_back(X[i]);
  } else {
    background = X;
  }

  const int d = X.empty() ? 0 : static_cast<int>(X[0].size());

  if (opts.mode == ShapModeKind::Retrain) {
    if (y.size() != X.size())
      throw ShapError("shap_matrix: Retrain mode needs training labels");
    Hyperparams h;
    h.kernel = m.kernel;
    res.mode = "retrain";
    SvmModel full = m;
    double alpha_sum = std::accumulate(full.alphas.begin(), full.alphas.end(), 0.0);
    double base = 0;
    for (std::size_t i = 0; i < full.alphas.size(); ++i)
      base += full.alphas[i] * full.sv_labels[i];
    res.base_value = alpha_sum > 0 ? base / alpha_sum : 0.0;
    res.phi.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
      res.phi[k] = shapley_exact_retrain(X, y, h, rows[k],
                                         std::min(opts.exact_limit, 10));
    return res;
  }

  const bool exact = d <= opts.exact_limit;
  res.mode = exact ? "marginalize" : "marginalize-sampled";
  {
    std::vector<bool> none(d, false);
    res.base_value = X.empty() ? 0.0 : marginalize_value(m, X[0], background, none);
  }

  res.phi.resize(rows.size());
  auto compute_row = [&](std::size_t k) {
    if (exact)
      res.phi[k] = shapley_exact(m, X, rows[k], background, opts.exact_limit);
    else
      // Per-row seed keeps results independent of scheduling.
      res.phi[k] = shapley_sampled(m, X, rows[k], background, opts.n_permutations,
                                   opts.seed + static_cast<std::uint64_t>(rows[k]) * 1000003ULL);
  };
  if (opts.threads <= 1 || rows.size() <= 1) {
    for (std::size_t k = 0; k < rows.size(); ++k) compute_row(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int nthreads = std::min<std::size_t>(opts.threads, rows.size());
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < rows.size(); k = next.fetch_add(1))
          compute_row(k);
      });
    for (auto& th : pool) th.join();
  }
  return res;
}

std::string attribution_report(const ShapResult& result, std::size_t pos,
                               const BinarizedMatrix& columns, const Dataset& d) {
  const auto& phi = result.phi.at(pos);
  const int row = result.row_indices.at(pos);
  double output = result.base_value;
  for (double p : phi) output += p;

  std::ostringstream out;
  out << "sample " << row << '\n';
  out << "base value: " << format_double_trimmed(result.base_value, 4) << '\n';
  out << "model output: " << format_double_trimmed(output, 4) << '\n';

  std::vector<std::size_t> order(phi.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (phi[a] != phi[b]) return phi[a] > phi[b];
    return a < b;  // ties by column index
  });
  const Sample& sm = d.samples.at(row);
  for (std::size_t c : order) {
    if (phi[c] == 0.0) continue;
    const ColumnRef& ref = columns.column_map[c];
    out << (phi[c] > 0 ? "  [+] " : "  [-] ") << columns.column_names[c] << " (";
    out << d.schema.feature_names[ref.feature] << "=";
    if (d.schema.is_numeric(ref.feature))
      out << format_double_trimmed(std::get<double>(sm.values[ref.feature]), 4);
    else
      out << std::get<std::string>(sm.values[ref.feature]);
    out << ") phi=" << format_double_trimmed(phi[c], 6) << '\n';
  }
  return out.str();
}

std::string shap_matrix_to_csv(const ShapResult& result,
                               const std::vector<std::string>& column_names) {
  std::ostringstream out;
  out << "# base_value " << format_double_roundtrip(result.base_value) << '\n';
  out << "# mode " << result.mode << '\n';
  out << "sample_index";
  for (const auto& n : column_names) out << ',' << n;
  out << '\n';
  for (std::size_t k = 0; k < result.phi.size(); ++k) {
    out << result.row_indices[k];
    for (double v : result.phi[k]) out << ',' << format_double_roundtrip(v);
    out << '\n';
  }
  return out.str();
}

}  // namespace shapfoil
